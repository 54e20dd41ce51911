#include "msslab/harness.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "msslab/cache.hpp"
#include "msslab/error.hpp"
#include "msslab/modular.hpp"
#include "msslab/primes.hpp"
#include "msslab/rankin.hpp"
#include "msslab/report.hpp"
#include "msslab/shortsum.hpp"
#include "msslab/specfn.hpp"

#ifndef MSSLAB_VERSION
#define MSSLAB_VERSION "0.0.0"
#endif

namespace msslab {

namespace {

namespace fs = std::filesystem;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::array<std::string_view, 4> kSatakeHeader = {"p", "j", "re", "im"};
constexpr std::array<std::string_view, 10> kErrorTermHeader = {
    "form_label", "X", "n", "theta", "L", "increment_ms", "increment_stderr", "samples", "theorem1_ms", "ratio"};

std::string hex(std::uint64_t v, int width) {
    std::ostringstream s;
    s << std::hex << std::setw(width) << std::setfill('0') << v;
    return s.str();
}

std::string one_line(std::string s) {
    std::replace(s.begin(), s.end(), '\n', ' ');
    return s;
}

std::string fd(double v) { return format_double(v); }

struct Manifest {
    std::vector<std::pair<std::string, std::string>> entries;
    void add(std::string key, std::string value) { entries.emplace_back(std::move(key), one_line(std::move(value))); }
};

struct Context {
    const ExperimentConfig& cfg;
    const RunOptions& opt;
    std::ostream& log;
    Manifest& man;
    fs::path dir;
    std::vector<fs::path>& files;
    std::vector<std::pair<fs::path, std::size_t>> csvs;

    void finish(CsvWriter& w) {
        w.close();
        files.push_back(w.path());
        csvs.emplace_back(w.path(), w.rows());
    }
};

std::string csv_label(const ExperimentConfig& cfg, const FormSpec& form) {
    return form.arithmetic() ? cfg.label : cfg.label + "(non-arithmetic)";
}

std::uint32_t need_M(double end) { return static_cast<std::uint32_t>(std::ceil(end)); }

void require_M(const ExperimentConfig& cfg, double end, const std::string& what) {
    if (static_cast<double>(cfg.M) < end) {
        std::ostringstream msg;
        msg << "form.M: " << what << " needs M >= " << need_M(end) << ", got " << cfg.M;
        throw Error(Errc::ConfigError, msg.str());
    }
}

HeckeTable table_for(Context& ctx, const FormSpec& form, std::uint32_t M) {
    auto res = load_or_build_cache(form, M, ctx.cfg.cache_dir, ctx.log);
    ctx.man.add("cache.path", res.path.string());
    ctx.man.add("cache.crc32", hex(res.file_crc, 8));
    ctx.man.add("cache.status", cache_status_name(res.status));
    ctx.man.add("cache.served_M", std::to_string(res.table.M()));
    return std::move(res.table);
}

void record_form(Context& ctx, const FormSpec& form) {
    ctx.man.add("form.fingerprint", hex(form.fingerprint(), 16));
    ctx.man.add("form.arithmetic", form.arithmetic() ? "true" : "false");
    if (form.gl2) {
        ctx.man.add("form.gl2_origin", form.gl2->origin());
        ctx.man.add("form.gl2_max_prime", std::to_string(form.gl2->max_prime()));
        ctx.man.add("form.gl2_bound_violations", std::to_string(form.gl2->bound_violations().size()));
    }
}

// Returns the largest prime <= M that a lift needs.
std::uint32_t largest_prime_upto(std::uint32_t M) {
    for (std::uint32_t m = M; m >= 2; --m)
        if (is_prime(m)) return m;
    return 0;
}

void cmd_gen_form(Context& ctx) {
    FormSpec form = resolve_form(ctx.cfg, ctx.log);
    record_form(ctx, form);
    std::uint32_t top = std::min<std::uint32_t>(ctx.cfg.M, 1000);
    CsvWriter out(ctx.dir / "satake.csv", kSatakeHeader);
    for (std::uint32_t p : primes_up_to(top)) {
        auto sp = satake_for(form, p);
        for (int j = 0; j < sp.rank(); ++j)
            out.row({std::to_string(p), std::to_string(j), fd(sp.alphas[j].real()), fd(sp.alphas[j].imag())});
    }
    ctx.finish(out);
}

void cmd_build_table(Context& ctx) {
    FormSpec form = resolve_form(ctx.cfg, ctx.log);
    record_form(ctx, form);
    table_for(ctx, form, ctx.cfg.M);
}

void cmd_rankin(Context& ctx) {
    const auto& cfg = ctx.cfg;
    FormSpec form = resolve_form(cfg, ctx.log);
    record_form(ctx, form);
    require_M(cfg, std::pow(cfg.X, cfg.theta), "weighted_sin_sum at X^theta");
    HeckeTable table = table_for(ctx, form, cfg.M);
    const std::string label = csv_label(cfg, form);
    CsvWriter out(ctx.dir / "rankin.csv", kRankinHeader);

    SlopeEstimate slope;
    for (std::uint32_t x : {cfg.rankin_x / 4, cfg.rankin_x / 2, cfg.rankin_x}) {
        if (x < 2) continue;
        slope = empirical_rs_slope(table, x);
        out.row({label, std::to_string(x), "rs_slope", fd(slope.slope), fd(slope.drift), fd(kNaN)});
    }

    std::optional<HfOneReport> H;
    if (form.arithmetic()) {
        for (std::uint32_t P : {cfg.P_max / 2, cfg.P_max}) {
            if (P < 2) continue;
            H = H_f_one(form, P, cfg.k_max);
            out.row({label, std::to_string(P), "H_f_one", fd(H->value), fd(H->drift), fd(H->log_tail)});
        }
    } else {
        ctx.log << "H_f(1) skipped: the degenerate form is not arithmetic\n";
        ctx.man.add("note.H_f_one", "skipped for a non-arithmetic form");
    }

    if (form.n == 3) {
        const std::uint32_t x = std::min<std::uint32_t>(cfg.rankin_x, 1000000);
        double previous = kNaN;
        MultiIndexSum mi;
        for (std::uint32_t xi : {x / 10, x}) {
            if (xi < 1) continue;
            mi = rs_multi_index_sum(form, xi);
            double drift = std::isnan(previous) ? kNaN : std::abs(mi.ratio / previous - 1.0);
            out.row({label, std::to_string(xi), "multi_index_ratio", fd(mi.ratio), fd(drift), fd(kNaN)});
            previous = mi.ratio;
        }
        if (H) {
            auto fc = factorisation_check(slope.slope, mi.ratio, H->value, form.n);
            out.row({label, std::to_string(cfg.rankin_x), "factorisation_raw", fd(fc.raw), fd(std::abs(fc.raw - 1.0)), fd(kNaN)});
            out.row({label, std::to_string(cfg.rankin_x), "factorisation_corrected", fd(fc.corrected),
                     fd(std::abs(fc.corrected - 1.0)), fd(kNaN)});
        }
    } else {
        ctx.man.add("note.multi_index", "multi-index sum is implemented for n = 3 only");
    }

    for (double L : cfg.L) {
        auto w = weighted_sin_sum(table, cfg.X, cfg.theta, L);
        const std::string X = fd(cfg.X), tag = "_L" + fd(L);
        out.row({label, X, "weighted_sin_sum" + tag, fd(w.value), fd(std::abs(w.ratio - 1.0)), fd(kNaN)});
        out.row({label, X, "weighted_sin_prediction" + tag, fd(w.prediction), fd(kNaN), fd(kNaN)});
        out.row({label, X, "weighted_sin_finite_prediction" + tag, fd(w.finite_prediction),
                 fd(std::abs(w.value / w.finite_prediction - 1.0)), fd(kNaN)});
    }
    ctx.finish(out);
}

// Checks every window before any sampling so a rejected run writes no CSV.
void screen_windows(Context& ctx, const std::vector<double>& windows, Window kind, const std::string& name) {
    const auto& cfg = ctx.cfg;
    std::string rejected;
    for (double w : windows) {
        auto adm = admissible_params(cfg.X, w, cfg.theta, cfg.n, cfg.vartheta, cfg.eps, kind);
        std::string verdict;
        if (adm.ok()) {
            verdict = "ok";
        } else if (adm.hard_ok() && ctx.opt.force) {
            verdict = "forced; " + adm.violations();
        } else {
            verdict = "rejected; " + adm.violations();
            rejected += (rejected.empty() ? "" : " | ") + name + "=" + fd(w) + ": " + adm.violations();
        }
        ctx.man.add("admissibility." + name + "_" + fd(w), verdict);
    }
    if (!rejected.empty()) throw Error(Errc::InadmissibleParams, rejected);
}

ExperimentParams params_for(const ExperimentConfig& cfg, double window, bool force) {
    ExperimentParams p;
    p.X = cfg.X;
    p.window = window;
    p.theta = cfg.theta;
    p.vartheta = cfg.vartheta;
    p.eps = cfg.eps;
    p.samples = cfg.samples;
    p.seed = cfg.seed;
    p.force = force;
    p.series_cutoff = cfg.series_cutoff;
    return p;
}

std::vector<std::string> variance_row(const std::string& label, const ExperimentConfig& cfg, const ExperimentResult& r) {
    return {label,
            fd(cfg.X),
            std::to_string(cfg.n),
            fd(cfg.theta),
            fd(r.moment.window),
            fd(r.moment.value),
            fd(r.moment.stderr_),
            std::to_string(r.moment.samples),
            fd(r.constants.candidate_paper),
            fd(r.constants.candidate_derived),
            fd(r.constants.empirical_c),
            nearest_name(r.constants.nearest)};
}

void cmd_theorem1(Context& ctx) {
    const auto& cfg = ctx.cfg;
    screen_windows(ctx, cfg.L, Window::Theorem1, "L");
    const double min_L = *std::min_element(cfg.L.begin(), cfg.L.end());
    require_M(cfg, 2.0 * cfg.X + std::pow(2.0 * cfg.X, 1.0 - 1.0 / cfg.n) / min_L, "theorem1 at this X and L");
    FormSpec form = resolve_form(cfg, ctx.log);
    record_form(ctx, form);
    HeckeTable table = table_for(ctx, form, cfg.M);
    const double slope = empirical_rs_slope(table, table.M()).slope;
    ctx.man.add("slope", fd(slope));
    const std::string label = csv_label(cfg, form);

    CsvWriter var(ctx.dir / "variance.csv", kVarianceHeader);
    CsvWriter err(ctx.dir / "error_term.csv", kErrorTermHeader);
    for (double L : cfg.L) {
        auto p = params_for(cfg, L, ctx.opt.force);
        auto r = theorem1_experiment(table, p, slope);
        var.row(variance_row(label, cfg, r));
        auto e = error_increment_mean_square(table, p);
        err.row({label, fd(cfg.X), std::to_string(cfg.n), fd(cfg.theta), fd(L), fd(e.value), fd(e.stderr_),
                 std::to_string(e.samples), fd(r.moment.value), fd(e.value / r.moment.value)});
        ctx.log << "theorem1 L=" << L << " estimate=" << r.moment.value << " c=" << r.constants.empirical_c
                << " nearest=" << nearest_name(r.constants.nearest) << "\n";
    }
    ctx.finish(var);
    ctx.finish(err);
}

void cmd_theorem2(Context& ctx) {
    const auto& cfg = ctx.cfg;
    std::vector<double> deltas = cfg.Delta;
    if (deltas.empty()) deltas.push_back(std::pow(cfg.X, 0.75));
    screen_windows(ctx, deltas, Window::Theorem2, "Delta");
    require_M(cfg, 2.0 * cfg.X + *std::max_element(deltas.begin(), deltas.end()), "theorem2 at this X and Delta");
    FormSpec form = resolve_form(cfg, ctx.log);
    record_form(ctx, form);
    HeckeTable table = table_for(ctx, form, cfg.M);
    const double slope = empirical_rs_slope(table, table.M()).slope;
    ctx.man.add("slope", fd(slope));
    const std::uint32_t cutoff = cfg.series_cutoff == 0 ? table.M() : cfg.series_cutoff;
    auto bf = bf_constant(table, cutoff, slope, form.arithmetic());
    ctx.man.add("B_f.value", fd(bf.value));
    ctx.man.add("B_f.series", fd(bf.series));
    ctx.man.add("B_f.tail", fd(bf.tail));
    ctx.man.add("B_f.cutoff", std::to_string(cutoff));
    const std::string label = csv_label(cfg, form);

    CsvWriter var(ctx.dir / "variance.csv", kVarianceHeader);
    for (double d : deltas) {
        auto r = theorem2_experiment(table, params_for(cfg, d, ctx.opt.force), slope);
        var.row(variance_row(label, cfg, r));
        ctx.log << "theorem2 Delta=" << d << " estimate=" << r.moment.value
                << " ratio=" << r.constants.empirical_c / r.constants.candidate_paper << "\n";
    }
    ctx.finish(var);
}

void cmd_omega_check(Context& ctx) {
    const auto& cfg = ctx.cfg;
    const int n = cfg.n;
    CsvWriter out(ctx.dir / "omega.csv", kOmegaHeader);
    std::size_t skipped = 0;
    for (int nu : cfg.omega_nu) {
        for (int k : cfg.omega_k) {
            for (double y : cfg.omega_y) {
                OmegaParams p;
                p.nu = nu;
                p.k = k;
                p.y = y;
                p.n = n;
                p.delta = cfg.omega_delta;
                p.Lambda = cfg.omega_Lambda;
                p.Y = cfg.omega_Y > 0.0 ? cfg.omega_Y : 10.0 * (2.0 / n) * std::pow(y, 1.0 / n);
                OmegaResult r;
                try {
                    r = omega_quadrature(p);
                } catch (const Error& e) {
                    if (e.code() != Errc::NonConvergence || !ctx.opt.force) throw;
                    ctx.log << "warning: " << e.what() << " (nu=" << nu << ", k=" << k << ", y=" << y << "), skipped\n";
                    ctx.man.add("omega.skipped.nu" + std::to_string(nu) + "_k" + std::to_string(k) + "_y" + fd(y), e.what());
                    ++skipped;
                    continue;
                }
                double main = omega_main_term(nu, k, y, n).bessel_form;
                out.row({std::to_string(n), std::to_string(nu), std::to_string(k), fd(y), fd(p.delta), fd(p.Y), fd(p.Lambda),
                         fd(r.value.real()), fd(r.value.imag()), fd(main), fd(r.value.real() - main), fd(omega_envelope(p))});
            }
        }
    }
    ctx.man.add("omega.skipped", std::to_string(skipped));
    ctx.finish(out);
}

void cmd_report(Context& ctx) {
    const fs::path root = ctx.cfg.out_dir;
    std::vector<fs::path> manifests;
    std::error_code ec;
    if (fs::is_directory(root, ec)) {
        for (const auto& entry : fs::directory_iterator(root)) {
            auto m = entry.path() / "manifest.txt";
            if (entry.is_directory() && entry.path().filename() != "report" && fs::exists(m)) manifests.push_back(m);
        }
    }
    std::sort(manifests.begin(), manifests.end());
    fs::create_directories(ctx.dir);
    const fs::path summary = ctx.dir / "summary.txt";
    std::ofstream out(summary, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::IoError, "cannot write " + summary.string());
    out << "runs=" << manifests.size() << '\n';
    for (const auto& m : manifests) {
        std::ifstream in(m);
        const std::string cmd = m.parent_path().filename().string();
        std::string line;
        while (std::getline(in, line)) {
            if (line.starts_with("status=") || line.starts_with("exit_code=") || line.starts_with("message=") ||
                line.starts_with("file.") || line.starts_with("admissibility.") || line.starts_with("wall_time_s="))
                out << cmd << '.' << line << '\n';
        }
    }
    out.close();
    if (!out) throw Error(Errc::IoError, "write failed for " + summary.string());
    ctx.files.push_back(summary);
}

void write_manifest(const fs::path& path, const Manifest& man) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
    for (const auto& [k, v] : man.entries) out << k << '=' << v << '\n';
    if (!out) throw Error(Errc::IoError, "write failed for " + path.string());
}

}  // namespace

const char* version_string() noexcept { return MSSLAB_VERSION; }

const std::vector<std::string>& commands() {
    static const std::vector<std::string> list = {"gen-form", "build-table", "rankin", "theorem1",
                                                  "theorem2", "omega-check", "report"};
    return list;
}

FormSpec resolve_form(const ExperimentConfig& cfg, std::ostream& log) {
    FormSpec form;
    form.n = cfg.n;
    form.seed = cfg.form_seed;
    form.theta_assumed = cfg.vartheta;
    form.label = cfg.label;
    if (cfg.source == "synthetic") {
        form.source = SourceKind::SyntheticTempered;
    } else if (cfg.source == "degenerate") {
        form.source = SourceKind::Degenerate;
    } else {
        form.source = SourceKind::SymLift;
        fs::path file;
        if (cfg.ap_file == "builtin:delta") {
            const std::uint32_t bound = cfg.ap_bound ? cfg.ap_bound : cfg.M;
            file = cfg.cache_dir / ("delta-" + std::to_string(bound) + ".ap");
            bool usable = fs::exists(file);
            if (usable) {
                try {
                    auto data = ingest_ap_file(file);
                    form.gl2 = std::make_shared<const Gl2Data>(std::move(data));
                } catch (const Error& e) {
                    if (e.code() != Errc::ParseError) throw;
                    log << "warning: " << e.what() << "; regenerating\n";
                    usable = false;
                }
            }
            if (!usable) {
                log << "generating tau(p)/p^(11/2) for p <= " << bound << "\n";
                fs::create_directories(cfg.cache_dir);
                write_ap_file(file, delta_eigenvalues(bound), "tau(p)/p^(11/2), p <= " + std::to_string(bound));
                form.gl2 = std::make_shared<const Gl2Data>(ingest_ap_file(file));
            }
        } else {
            file = cfg.ap_file;
            form.gl2 = std::make_shared<const Gl2Data>(ingest_ap_file(file));
        }
        const std::uint32_t needed = largest_prime_upto(cfg.M);
        if (form.gl2->max_prime() < needed)
            throw Error(Errc::ConfigError, "form.ap_file: a_p data stops at p = " + std::to_string(form.gl2->max_prime()) +
                                               ", form.M needs p = " + std::to_string(needed));
    }
    validate(form);
    return form;
}

RunOutcome run(const std::string& command, const ExperimentConfig& cfg, const RunOptions& options) {
    std::ostream null_stream(nullptr);
    std::ostream& log = options.log ? *options.log : null_stream;
    const auto start = std::chrono::steady_clock::now();

    RunOutcome outcome;
    Manifest body;
    const fs::path dir = cfg.out_dir / command;
    Context ctx{cfg, options, log, body, dir, outcome.files, {}};

    try {
        if (std::find(commands().begin(), commands().end(), command) == commands().end())
            throw Error(Errc::ConfigError, "command: unknown '" + command + "'");
        validate(cfg);
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (ec) throw Error(Errc::IoError, "cannot create " + dir.string() + ": " + ec.message());
        if (command == "gen-form") cmd_gen_form(ctx);
        else if (command == "build-table") cmd_build_table(ctx);
        else if (command == "rankin") cmd_rankin(ctx);
        else if (command == "theorem1") cmd_theorem1(ctx);
        else if (command == "theorem2") cmd_theorem2(ctx);
        else if (command == "omega-check") cmd_omega_check(ctx);
        else cmd_report(ctx);
    } catch (const Error& e) {
        outcome.exit_code = exit_code_for(e.code());
        outcome.message = e.what();
    } catch (const fs::filesystem_error& e) {
        outcome.exit_code = 5;
        outcome.message = std::string("IoError: ") + e.what();
    }
    if (!outcome.message.empty()) log << "error: " << outcome.message << "\n";

    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    Manifest man;
    man.add("command", command);
    man.add("version", version_string());
    man.add("status", outcome.exit_code == 0 ? "ok" : "error");
    man.add("exit_code", std::to_string(outcome.exit_code));
    man.add("message", outcome.message);
    man.add("threads", std::to_string(options.threads));
    man.add("force", options.force ? "true" : "false");
    std::ostringstream wall_text;
    wall_text << std::fixed << std::setprecision(3) << wall;
    man.add("wall_time_s", wall_text.str());
    for (auto& [k, v] : config_echo(cfg)) man.add("config." + k, v);
    for (auto& e : body.entries) man.entries.push_back(e);
    for (const auto& [path, rows] : ctx.csvs)
        man.add("file." + path.filename().string(), "crc32=" + hex(file_crc32(path), 8) + ";rows=" + std::to_string(rows));
    for (const auto& f : outcome.files)
        if (f.extension() != ".csv") man.add("file." + f.filename().string(), "crc32=" + hex(file_crc32(f), 8));

    outcome.manifest = dir / "manifest.txt";
    try {
        std::error_code ec;
        fs::create_directories(dir, ec);
        write_manifest(outcome.manifest, man);
    } catch (const Error& e) {
        log << "error: " << e.what() << "\n";
        if (outcome.exit_code == 0) {
            outcome.exit_code = 5;
            outcome.message = e.what();
        }
    }
    return outcome;
}

}  // namespace msslab
