#include "epigraphon/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "epigraphon/error.hpp"
#include "epigraphon/format.hpp"

namespace epigraphon {

std::string_view to_string(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::GraphSeir: return "graph-seir";
        case ScenarioKind::GraphonSeir: return "graphon-seir";
        case ScenarioKind::Spectral: return "spectral";
        case ScenarioKind::Sample: return "sample";
        case ScenarioKind::Converge: return "converge";
    }
    return "unknown";
}

std::optional<ScenarioKind> parse_kind(std::string_view text) {
    if (text == "graph-seir" || text == "simulate-graph") return ScenarioKind::GraphSeir;
    if (text == "graphon-seir" || text == "simulate-graphon") return ScenarioKind::GraphonSeir;
    if (text == "spectral") return ScenarioKind::Spectral;
    if (text == "sample") return ScenarioKind::Sample;
    if (text == "converge") return ScenarioKind::Converge;
    return std::nullopt;
}

namespace {

struct LineError {
    std::string message;
};

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

double to_double(std::string_view s) {
    s = trim(s);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
        throw LineError{"expected a number, got '" + std::string(s) + "'"};
    return v;
}

std::uint64_t to_uint(std::string_view s) {
    s = trim(s);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
        throw LineError{"expected a nonnegative integer, got '" + std::string(s) + "'"};
    return v;
}

bool to_bool(std::string_view s) {
    if (s == "true" || s == "yes" || s == "1") return true;
    if (s == "false" || s == "no" || s == "0") return false;
    throw LineError{"expected true or false, got '" + std::string(s) + "'"};
}

std::vector<std::size_t> to_sizes(std::string_view s) {
    std::vector<std::size_t> out;
    for (std::string_view part : split(s, ',')) out.push_back(static_cast<std::size_t>(to_uint(part)));
    return out;
}

// Rows separated by ';', entries by ','.
Matrix to_matrix(std::string_view s) {
    std::vector<Vector> rows;
    for (std::string_view row : split(s, ';')) {
        Vector r;
        for (std::string_view v : split(row, ',')) r.push_back(to_double(v));
        if (!rows.empty() && r.size() != rows.front().size()) throw LineError{"matrix rows have different lengths"};
        rows.push_back(std::move(r));
    }
    Matrix m(rows.size(), rows.front().size());
    for (std::size_t a = 0; a < rows.size(); ++a)
        for (std::size_t b = 0; b < rows[a].size(); ++b) m(a, b) = rows[a][b];
    return m;
}

RateSpec to_rate(std::string_view s) {
    RateSpec rate;
    if (s.starts_with("file:")) {
        rate.kind = RateSpec::Kind::File;
        rate.file = std::string(trim(s.substr(5)));
        if (rate.file.empty()) throw LineError{"empty rate file path"};
        return rate;
    }
    if (s.starts_with("seasonal(") && s.ends_with(")")) {
        const auto args = split(s.substr(9, s.size() - 10), ',');
        if (args.size() != 3) throw LineError{"seasonal(base, amplitude, period) takes three arguments"};
        rate.kind = RateSpec::Kind::Seasonal;
        rate.value = to_double(args[0]);
        rate.amplitude = to_double(args[1]);
        rate.period = to_double(args[2]);
        return rate;
    }
    rate.value = to_double(s);
    return rate;
}

Method to_method(std::string_view s) {
    if (s == "euler") return Method::Euler;
    if (s == "rk4") return Method::RK4;
    throw LineError{"method must be euler or rk4"};
}

SamplingMode to_sampling(std::string_view s) {
    for (SamplingMode m : {SamplingMode::ProjectContinuum, SamplingMode::SampleDeterministic, SamplingMode::SampleRandom})
        if (s == to_string(m)) return m;
    throw LineError{"mode must be project-continuum, sample-deterministic or sample-random"};
}

FieldNorm to_norm(std::string_view s) {
    if (s == "sup") return FieldNorm::SupPointwise;
    if (s == "l2") return FieldNorm::L2;
    throw LineError{"norm must be sup or l2"};
}

void assign(ScenarioConfig& cfg, std::string_view section, std::string_view key, std::string_view value) {
    const std::string v(value);
    if (section == "model") {
        if (key == "kind") {
            cfg.kind = parse_kind(value);
            if (!cfg.kind) throw LineError{"unknown kind '" + v + "'"};
            return;
        }
    } else if (section == "graph") {
        GraphSpec& g = *cfg.graph;
        if (key == "family") return void(g.family = v);
        if (key == "p") return void(g.p = to_double(value));
        if (key == "block_sizes") return void(g.block_sizes = to_sizes(value));
        if (key == "block_weights") return void(g.block_weights = to_matrix(value));
        if (key == "file") return void(g.file = v);
        if (key == "coupling") return void(g.coupling = v);
    } else if (section == "graphon") {
        GraphonSpec& w = *cfg.graphon;
        if (key == "type") return void(w.type = v);
        if (key == "c_w") return void(w.c_w = to_double(value));
        if (key == "x0") return void(w.x0 = to_double(value));
        if (key == "sigma") return void(w.sigma = to_double(value));
        if (key == "values") return void(w.values = to_matrix(value));
        if (key == "shape") return void(w.shape = to_double(value));
        if (key == "rate") return void(w.rate = to_double(value));
        if (key == "cap") return void(w.cap = to_double(value));
        if (key == "value") return void(w.value = to_double(value));
        if (key == "file") return void(w.file = v);
    } else if (section == "params") {
        if (key == "beta") return void(cfg.beta = to_rate(value));
        if (key == "mu") return void(cfg.mu = to_rate(value));
        if (key == "gamma") return void(cfg.gamma = to_rate(value));
    } else if (section == "init") {
        InitSpec& in = cfg.init;
        if (key == "profile") return void(in.profile = v);
        if (key == "s") return void(in.s = to_double(value));
        if (key == "e") return void(in.e = to_double(value));
        if (key == "i") return void(in.i = to_double(value));
        if (key == "r") return void(in.r = to_double(value));
        if (key == "cell") return void(in.cell = static_cast<std::size_t>(to_uint(value)));
        if (key == "i0") return void(in.i0 = to_double(value));
        if (key == "center") return void(in.center = to_double(value));
        if (key == "width") return void(in.width = to_double(value));
        if (key == "file") return void(in.file = v);
    } else if (section == "run") {
        RunSpec& r = cfg.run;
        if (key == "method") return void(r.method = to_method(value));
        if (key == "dt") return void(r.dt = to_double(value));
        if (key == "T") return void(r.t_end = to_double(value));
        if (key == "record_every") return void(r.record_every = static_cast<std::size_t>(to_uint(value)));
        if (key == "n") return void(r.n = static_cast<std::size_t>(to_uint(value)));
        if (key == "seed") return void(r.seed = to_uint(value));
        if (key == "spectral_diagnostics") return void(r.spectral_diagnostics = to_bool(value));
    } else if (section == "output") {
        if (key == "dir") return void(cfg.output.dir = v);
        if (key == "heatmap") return void(cfg.output.heatmap = to_bool(value));
        if (key == "timing") return void(cfg.output.timing = to_bool(value));
    } else if (section == "sample") {
        if (key == "n_list") return void(cfg.sample.n_list = to_sizes(value));
        if (key == "mode") return void(cfg.sample.mode = v);
    } else if (section == "converge") {
        if (key == "n_list") return void(cfg.converge.n_list = to_sizes(value));
        if (key == "reference_n") return void(cfg.converge.reference_n = static_cast<std::size_t>(to_uint(value)));
        if (key == "mode") return void(cfg.converge.mode = to_sampling(value));
        if (key == "norm") return void(cfg.converge.norm = to_norm(value));
    }
    throw LineError{"unknown key '" + std::string(key) + "' in [" + std::string(section) + "]"};
}

const std::set<std::string_view> kSections{"model", "graph", "graphon", "params", "init",
                                           "run",   "output", "sample", "converge"};

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorKind::ValidationError, what); }

void check_n_list(const std::vector<std::size_t>& list, const char* name, std::size_t minimum) {
    if (list.empty()) invalid(std::string(name) + " must not be empty");
    for (std::size_t k = 0; k < list.size(); ++k) {
        if (list[k] < minimum) invalid(fmt::format("{} entries must be at least {}", name, minimum));
        if (k > 0 && list[k] <= list[k - 1]) invalid(std::string(name) + " must be strictly increasing");
    }
}

void check_rate(const RateSpec& rate, const char* name) {
    switch (rate.kind) {
        case RateSpec::Kind::Scalar:
            if (!(rate.value >= 0.0) || !std::isfinite(rate.value)) invalid(std::string(name) + " must be >= 0");
            break;
        case RateSpec::Kind::File: break;
        case RateSpec::Kind::Seasonal:
            if (!(rate.value >= 0.0) || !std::isfinite(rate.value)) invalid(std::string(name) + " base must be >= 0");
            if (!(rate.amplitude >= 0.0 && rate.amplitude <= 1.0))
                invalid(std::string(name) + " seasonal amplitude must lie in [0,1]");
            if (!(rate.period > 0.0)) invalid(std::string(name) + " seasonal period must be positive");
            break;
    }
}

}  // namespace

void validate_config(const ScenarioConfig& cfg) {
    if (cfg.graph && cfg.graphon) invalid("exactly one of [graph] and [graphon] may be given");
    if (cfg.kind) {
        switch (*cfg.kind) {
            case ScenarioKind::GraphSeir:
                if (!cfg.graph) invalid("graph-seir needs a [graph] section");
                break;
            case ScenarioKind::GraphonSeir:
            case ScenarioKind::Sample:
            case ScenarioKind::Converge:
                if (!cfg.graphon) invalid(std::string(to_string(*cfg.kind)) + " needs a [graphon] section");
                break;
            case ScenarioKind::Spectral:
                if (!cfg.graph && !cfg.graphon) invalid("spectral needs a [graph] or [graphon] section");
                break;
        }
    }
    if (!(cfg.run.dt > 0.0) || !std::isfinite(cfg.run.dt)) invalid("dt must be > 0");
    if (!(cfg.run.t_end > 0.0) || !std::isfinite(cfg.run.t_end)) invalid("T must be > 0");
    if (cfg.run.record_every == 0) invalid("record_every must be > 0");
    if (cfg.run.n == 0) invalid("n must be > 0");
    check_rate(cfg.beta, "beta");
    check_rate(cfg.mu, "mu");
    check_rate(cfg.gamma, "gamma");

    const InitSpec& in = cfg.init;
    if (in.profile == "uniform") {
        for (double v : {in.s, in.e, in.i, in.r})
            if (!(v >= 0.0 && v <= 1.0)) invalid("initial fractions must lie in [0,1]");
        if (std::abs(in.s + in.e + in.i + in.r - 1.0) > 1e-9) invalid("initial fractions must sum to 1 within 1e-9");
    } else if (in.profile == "seed-cell" || in.profile == "bump") {
        if (!(in.i0 >= 0.0 && in.i0 <= 1.0)) invalid("i0 must lie in [0,1]");
        if (in.profile == "bump" && !(in.width > 0.0)) invalid("bump width must be positive");
        if (in.profile == "seed-cell" && in.cell >= cfg.run.n && !(cfg.graph && cfg.graph->family == "file"))
            invalid("seed cell index must be below n");
    } else if (in.profile == "file") {
        if (in.file.empty()) invalid("init profile 'file' needs a file");
    } else {
        invalid("unknown init profile '" + in.profile + "'");
    }

    if (cfg.graph) {
        const GraphSpec& g = *cfg.graph;
        static const std::set<std::string> families{"complete", "path", "star", "erdos-renyi", "block", "file", "mobility"};
        if (!families.contains(g.family)) invalid("unknown graph family '" + g.family + "'");
        if (g.coupling != "mobility" && g.coupling != "mean-field" && g.coupling != "graphon-mean-field")
            invalid("coupling must be mobility, mean-field or graphon-mean-field");
        if ((g.family == "file" || g.family == "mobility") && g.file.empty()) invalid("graph family needs a file");
        if (g.family == "erdos-renyi" && !(g.p >= 0.0 && g.p <= 1.0)) invalid("p must lie in [0,1]");
        if (g.family == "block" && (g.block_sizes.empty() || g.block_weights.rows() == 0))
            invalid("block family needs block_sizes and block_weights");
    }
    if (cfg.graphon) {
        const GraphonSpec& w = *cfg.graphon;
        static const std::set<std::string> types{"gaussian", "block", "gamma", "constant", "file"};
        if (!types.contains(w.type)) invalid("unknown graphon type '" + w.type + "'");
        if (w.type == "block" && w.values.rows() == 0) invalid("block graphon needs values");
        if (w.type == "file" && w.file.empty()) invalid("graphon type 'file' needs a file");
    }
    check_n_list(cfg.sample.n_list, "sample n_list", 2);
    if (cfg.sample.mode != "random" && cfg.sample.mode != "deterministic")
        invalid("sample mode must be random or deterministic");
    check_n_list(cfg.converge.n_list, "converge n_list", 1);
    if (cfg.converge.reference_n && *cfg.converge.reference_n < 2 * cfg.converge.n_list.back())
        invalid("reference_n must be at least twice the largest n in n_list");
}

ScenarioConfig parse_config(std::string_view text) {
    ScenarioConfig cfg;
    std::string section;
    std::set<std::string> seen_sections;
    std::set<std::pair<std::string, std::string>> seen_keys;
    std::size_t line_no = 0;
    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto fail = [&](const std::string& msg) {
            throw Error(ErrorKind::ParseError, fmt::format("line {}: {}", line_no, msg));
        };
        if (line.front() == '[') {
            if (line.back() != ']') fail("unterminated section header");
            section = std::string(trim(line.substr(1, line.size() - 2)));
            if (!kSections.contains(section)) fail("unknown section [" + section + "]");
            if (!seen_sections.insert(section).second) fail("duplicate section [" + section + "]");
            if (section == "graph") cfg.graph.emplace();
            if (section == "graphon") cfg.graphon.emplace();
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) fail("expected 'key = value'");
        if (section.empty()) fail("key outside of any section");
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) fail("empty key or value");
        if (!seen_keys.insert({section, std::string(key)}).second) fail("duplicate key '" + std::string(key) + "'");
        try {
            assign(cfg, section, key, value);
        } catch (const LineError& e) {
            fail(e.message);
        }
    }
    validate_config(cfg);
    return cfg;
}

ScenarioConfig read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::IoError, "cannot open config '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

namespace {

std::string join_sizes(const std::vector<std::size_t>& v) {
    std::string out;
    for (std::size_t k = 0; k < v.size(); ++k) out += (k ? "," : "") + std::to_string(v[k]);
    return out;
}

std::string join_matrix(const Matrix& m) {
    std::string out;
    for (std::size_t a = 0; a < m.rows(); ++a) {
        if (a) out += ';';
        for (std::size_t b = 0; b < m.cols(); ++b) out += (b ? "," : "") + format_real(m(a, b));
    }
    return out;
}

std::string rate_text(const RateSpec& r) {
    switch (r.kind) {
        case RateSpec::Kind::Scalar: return format_real(r.value);
        case RateSpec::Kind::File: return "file:" + r.file;
        case RateSpec::Kind::Seasonal:
            return fmt::format("seasonal({}, {}, {})", format_real(r.value), format_real(r.amplitude),
                               format_real(r.period));
    }
    return {};
}

const char* bool_text(bool b) { return b ? "true" : "false"; }

}  // namespace

void write_config(std::ostream& out, const ScenarioConfig& cfg) {
    if (cfg.kind) out << "[model]\nkind = " << to_string(*cfg.kind) << "\n\n";
    if (cfg.graph) {
        const GraphSpec& g = *cfg.graph;
        out << "[graph]\nfamily = " << g.family << "\np = " << format_real(g.p) << '\n';
        if (!g.block_sizes.empty()) out << "block_sizes = " << join_sizes(g.block_sizes) << '\n';
        if (g.block_weights.rows() > 0) out << "block_weights = " << join_matrix(g.block_weights) << '\n';
        if (!g.file.empty()) out << "file = " << g.file << '\n';
        out << "coupling = " << g.coupling << "\n\n";
    }
    if (cfg.graphon) {
        const GraphonSpec& w = *cfg.graphon;
        out << "[graphon]\ntype = " << w.type << "\nc_w = " << format_real(w.c_w) << "\nx0 = " << format_real(w.x0)
            << "\nsigma = " << format_real(w.sigma) << '\n';
        if (w.values.rows() > 0) out << "values = " << join_matrix(w.values) << '\n';
        out << "shape = " << format_real(w.shape) << "\nrate = " << format_real(w.rate) << "\ncap = " << format_real(w.cap)
            << "\nvalue = " << format_real(w.value) << '\n';
        if (!w.file.empty()) out << "file = " << w.file << '\n';
        out << '\n';
    }
    out << "[params]\nbeta = " << rate_text(cfg.beta) << "\nmu = " << rate_text(cfg.mu)
        << "\ngamma = " << rate_text(cfg.gamma) << "\n\n";

    const InitSpec& in = cfg.init;
    out << "[init]\nprofile = " << in.profile << "\ns = " << format_real(in.s) << "\ne = " << format_real(in.e)
        << "\ni = " << format_real(in.i) << "\nr = " << format_real(in.r) << "\ncell = " << in.cell
        << "\ni0 = " << format_real(in.i0) << "\ncenter = " << format_real(in.center)
        << "\nwidth = " << format_real(in.width) << '\n';
    if (!in.file.empty()) out << "file = " << in.file << '\n';
    out << '\n';

    const RunSpec& r = cfg.run;
    out << "[run]\nmethod = " << (r.method == Method::Euler ? "euler" : "rk4") << "\ndt = " << format_real(r.dt)
        << "\nT = " << format_real(r.t_end) << "\nrecord_every = " << r.record_every << "\nn = " << r.n << '\n';
    if (r.seed) out << "seed = " << *r.seed << '\n';
    out << "spectral_diagnostics = " << bool_text(r.spectral_diagnostics) << "\n\n";

    out << "[output]\ndir = " << cfg.output.dir << "\nheatmap = " << bool_text(cfg.output.heatmap)
        << "\ntiming = " << bool_text(cfg.output.timing) << "\n\n";
    out << "[sample]\nn_list = " << join_sizes(cfg.sample.n_list) << "\nmode = " << cfg.sample.mode << "\n\n";
    out << "[converge]\nn_list = " << join_sizes(cfg.converge.n_list) << '\n';
    if (cfg.converge.reference_n) out << "reference_n = " << *cfg.converge.reference_n << '\n';
    out << "mode = " << to_string(cfg.converge.mode)
        << "\nnorm = " << (cfg.converge.norm == FieldNorm::SupPointwise ? "sup" : "l2") << '\n';
}

}  // namespace epigraphon
