#include "msslab/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "msslab/error.hpp"
#include "msslab/report.hpp"

namespace msslab {

namespace {

[[noreturn]] void bad(const std::string& key, const std::string& why) {
    throw Error(Errc::ConfigError, key + ": " + why);
}

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

template <class T>
T parse_number(const std::string& key, const std::string& text) {
    std::string t = trim(text);
    T v{};
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) bad(key, "cannot parse '" + text + "' as a number");
    if constexpr (std::is_floating_point_v<T>) {
        if (!std::isfinite(v)) bad(key, "must be finite");
    }
    return v;
}

template <class T>
std::vector<T> parse_list(const std::string& key, const std::string& text) {
    std::vector<T> out;
    std::string t = trim(text);
    if (t.empty()) return out;
    std::stringstream ss(t);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_number<T>(key, item));
    return out;
}

template <class T>
std::string show(const T& v) {
    if constexpr (std::is_floating_point_v<T>) return format_double(v);
    else return std::to_string(v);
}

template <class T>
std::string show_list(const std::vector<T>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + show(v[i]);
    return out;
}

struct Field {
    std::string key;
    std::function<void(ExperimentConfig&, const std::string&)> set;
    std::function<std::string(const ExperimentConfig&)> get;
};

template <class T>
Field number(std::string key, T ExperimentConfig::*member) {
    return {key, [key, member](ExperimentConfig& c, const std::string& v) { c.*member = parse_number<T>(key, v); },
            [member](const ExperimentConfig& c) { return show(c.*member); }};
}

template <class T>
Field list(std::string key, std::vector<T> ExperimentConfig::*member) {
    return {key, [key, member](ExperimentConfig& c, const std::string& v) { c.*member = parse_list<T>(key, v); },
            [member](const ExperimentConfig& c) { return show_list(c.*member); }};
}

Field text(std::string key, std::string ExperimentConfig::*member) {
    return {key, [member](ExperimentConfig& c, const std::string& v) { c.*member = trim(v); },
            [member](const ExperimentConfig& c) { return c.*member; }};
}

Field path(std::string key, std::filesystem::path ExperimentConfig::*member) {
    return {key, [member](ExperimentConfig& c, const std::string& v) { c.*member = trim(v); },
            [member](const ExperimentConfig& c) { return (c.*member).string(); }};
}

const std::vector<Field>& fields() {
    static const std::vector<Field> table = {
        number("form.n", &ExperimentConfig::n),
        text("form.source", &ExperimentConfig::source),
        number("form.seed", &ExperimentConfig::form_seed),
        number("form.vartheta", &ExperimentConfig::vartheta),
        text("form.label", &ExperimentConfig::label),
        text("form.ap_file", &ExperimentConfig::ap_file),
        number("form.ap_bound", &ExperimentConfig::ap_bound),
        number("form.M", &ExperimentConfig::M),
        number("experiment.X", &ExperimentConfig::X),
        list("experiment.L", &ExperimentConfig::L),
        list("experiment.Delta", &ExperimentConfig::Delta),
        number("experiment.theta", &ExperimentConfig::theta),
        number("experiment.eps", &ExperimentConfig::eps),
        number("experiment.samples", &ExperimentConfig::samples),
        number("experiment.seed", &ExperimentConfig::seed),
        number("experiment.P_max", &ExperimentConfig::P_max),
        number("experiment.k_max", &ExperimentConfig::k_max),
        number("experiment.series_cutoff", &ExperimentConfig::series_cutoff),
        number("experiment.rankin_x", &ExperimentConfig::rankin_x),
        list("experiment.omega_y", &ExperimentConfig::omega_y),
        list("experiment.omega_nu", &ExperimentConfig::omega_nu),
        list("experiment.omega_k", &ExperimentConfig::omega_k),
        number("experiment.omega_delta", &ExperimentConfig::omega_delta),
        number("experiment.omega_Lambda", &ExperimentConfig::omega_Lambda),
        number("experiment.omega_Y", &ExperimentConfig::omega_Y),
        path("output.dir", &ExperimentConfig::out_dir),
        path("output.cache_dir", &ExperimentConfig::cache_dir),
    };
    return table;
}

const Field* find_field(const std::string& key) {
    for (const auto& f : fields())
        if (f.key == key) return &f;
    return nullptr;
}

}  // namespace

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto& f : fields()) k.push_back(f.key);
        return k;
    }();
    return keys;
}

void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    const Field* f = find_field(key);
    if (!f) bad(key, "unknown key");
    f->set(cfg, value);
}

void validate(const ExperimentConfig& c) {
    if (c.n < 3 || c.n > 8) bad("form.n", "must be in [3, 8]");
    if (c.source != "synthetic" && c.source != "lift" && c.source != "degenerate")
        bad("form.source", "must be synthetic, lift or degenerate");
    if (!(c.vartheta >= 0.0 && c.vartheta <= 0.5)) bad("form.vartheta", "must be in [0, 1/2]");
    if (c.label.empty() || c.label.find_first_of(",\n\"") != std::string::npos)
        bad("form.label", "must be non-empty without commas, quotes or newlines");
    if (c.source == "lift" && c.ap_file.empty()) bad("form.ap_file", "required for a lift");
    if (c.M < 2 || c.M > (1u << 23)) bad("form.M", "must be in [2, 2^23]");
    if (!(c.X >= 2.0)) bad("experiment.X", "must be >= 2");
    if (c.L.empty()) bad("experiment.L", "needs at least one value");
    for (double L : c.L)
        if (!(L > 0.0)) bad("experiment.L", "values must be positive");
    for (double d : c.Delta)
        if (!(d > 0.0)) bad("experiment.Delta", "values must be positive");
    if (!(c.theta > 0.0 && c.theta < 1.0)) bad("experiment.theta", "must be in (0, 1)");
    if (!(c.eps >= 0.0 && c.eps < 0.5)) bad("experiment.eps", "must be in [0, 1/2)");
    if (c.samples < 2) bad("experiment.samples", "must be >= 2");
    if (c.P_max < 2) bad("experiment.P_max", "must be >= 2");
    if (c.k_max < c.n * c.n || c.k_max > 4096) bad("experiment.k_max", "must be in [n^2, 4096]");
    if (c.series_cutoff > c.M) bad("experiment.series_cutoff", "must not exceed form.M");
    if (c.rankin_x < 2 || c.rankin_x > c.M) bad("experiment.rankin_x", "must be in [2, form.M]");
    if (c.omega_y.empty()) bad("experiment.omega_y", "needs at least one value");
    for (double y : c.omega_y)
        if (!(y >= 1.0)) bad("experiment.omega_y", "values must be >= 1");
    for (int nu : c.omega_nu)
        if (nu < 0 || nu > 3) bad("experiment.omega_nu", "values must be in [0, 3]");
    for (int k : c.omega_k)
        if (k < 1 || k > 3) bad("experiment.omega_k", "values must be in [1, 3]");
    if (!(c.omega_delta > 0.0 && c.omega_delta <= 0.1)) bad("experiment.omega_delta", "must be in (0, 0.1]");
    if (!(c.omega_Lambda >= 1.0)) bad("experiment.omega_Lambda", "must be >= 1");
    if (!(c.omega_Y == 0.0 || c.omega_Y >= 1.0)) bad("experiment.omega_Y", "must be 0 (automatic) or >= 1");
    if (c.out_dir.empty()) bad("output.dir", "must not be empty");
    if (c.cache_dir.empty()) bad("output.cache_dir", "must not be empty");
}

ExperimentConfig parse_config(std::istream& in, const std::string& origin) {
    boost::property_tree::ptree tree;
    try {
        boost::property_tree::read_ini(in, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw Error(Errc::ConfigError, origin + ":" + std::to_string(e.line()) + ": " + e.message());
    }
    ExperimentConfig cfg;
    for (const auto& [section, body] : tree) {
        if (section != "form" && section != "experiment" && section != "output") {
            if (body.empty()) bad(section, "key outside a section");
            bad(section, "unknown section");
        }
        for (const auto& [key, value] : body) set_config_value(cfg, section + "." + key, value.data());
    }
    validate(cfg);
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& p) {
    std::ifstream in(p);
    if (!in) throw Error(Errc::ConfigError, "cannot open config file " + p.string());
    return parse_config(in, p.string());
}

std::vector<std::pair<std::string, std::string>> config_echo(const ExperimentConfig& cfg) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& f : fields()) out.emplace_back(f.key, f.get(cfg));
    return out;
}

ExperimentConfig config_from_manifest(const std::filesystem::path& manifest) {
    std::ifstream in(manifest);
    if (!in) throw Error(Errc::IoError, "cannot open manifest " + manifest.string());
    ExperimentConfig cfg;
    std::string line;
    bool any = false;
    while (std::getline(in, line)) {
        if (!line.starts_with("config.")) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        set_config_value(cfg, line.substr(7, eq - 7), line.substr(eq + 1));
        any = true;
    }
    if (!any) throw Error(Errc::ConfigError, manifest.string() + ": no config echo");
    validate(cfg);
    return cfg;
}

}  // namespace msslab
