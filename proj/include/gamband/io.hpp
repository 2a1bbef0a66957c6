#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gamband/errors.hpp"
#include "gamband/harness.hpp"
#include "gamband/model.hpp"

namespace gamband {

inline constexpr int kInstanceFormatVersion = 1;
inline constexpr int kTraceFormatVersion = 1;
inline constexpr int kSummaryFormatVersion = 1;

/// Shortest text that recovers the exact double: 17 significant digits.
inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace detail {

inline std::string fmt17_json(double v) {
    std::string s = fmt17(v);
    // JSON numbers need a leading digit; "%.17g" already provides one.
    if (s == "inf" || s == "-inf" || s == "nan")
        throw ConfigError("cannot serialize non-finite value");
    return s;
}

inline void write_array(std::ostream& os, const Vector& v) {
    os << "[";
    for (int i = 0; i < v.size(); ++i) {
        if (i) os << ", ";
        os << fmt17_json(v[i]);
    }
    os << "]";
}

}  // namespace detail

struct InstanceFile {
    RewardInstance instance;
    std::optional<std::uint64_t> seed;
    std::optional<MisspecCertificate> certificate;
};

/*
 * Instance file: a structured key-value document with the actions flattened
 * row-major.  Floats carry 17 significant digits so a write/read/write cycle
 * is byte-identical.
 */
inline void write_instance(const InstanceFile& file, const std::string& path) {
    const RewardInstance& inst = file.instance;
    std::ostringstream os;
    os << "{\n";
    os << "  \"format_version\": " << kInstanceFormatVersion << ",\n";
    os << "  \"dim\": " << inst.dim() << ",\n";
    os << "  \"actions\": [";
    for (int i = 0; i < inst.k(); ++i)
        for (int j = 0; j < inst.dim(); ++j) {
            if (i || j) os << ", ";
            os << detail::fmt17_json(inst.actions()[i][j]);
        }
    os << "],\n";
    os << "  \"f0\": ";
    detail::write_array(os, inst.f0());
    os << ",\n  \"w_star\": ";
    detail::write_array(os, inst.w_star());
    os << ",\n";
    os << "  \"sigma\": " << detail::fmt17_json(inst.sigma()) << ",\n";
    os << "  \"C_b\": " << detail::fmt17_json(inst.actions().norm_bound()) << ",\n";
    os << "  \"C_w\": " << detail::fmt17_json(inst.param_bound()) << ",\n";
    os << "  \"range_bound\": " << detail::fmt17_json(inst.range_bound());
    if (file.seed.has_value() || file.certificate.has_value()) {
        os << ",\n  \"meta\": {";
        bool first = true;
        if (file.seed.has_value()) {
            os << "\n    \"seed\": " << *file.seed;
            first = false;
        }
        if (file.certificate.has_value()) {
            const MisspecCertificate& c = *file.certificate;
            if (!first) os << ",";
            os << "\n    \"certificate\": {\"kind\": \"" << to_string(c.kind) << "\"";
            if (c.rho) os << ", \"rho\": " << detail::fmt17_json(*c.rho);
            if (c.eps) os << ", \"eps\": " << detail::fmt17_json(*c.eps);
            if (c.c_star) os << ", \"c_star\": " << detail::fmt17_json(*c.c_star);
            os << ", \"tolerance\": " << detail::fmt17_json(c.tolerance) << "}";
        }
        os << "\n  }";
    }
    os << "\n}\n";
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open for writing: " + path);
    f << os.str();
}

inline InstanceFile read_instance(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open instance file: " + path);
    nlohmann::json j;
    try {
        f >> j;
    } catch (const std::exception& e) {
        throw ConfigError("malformed instance file " + path + ": " + e.what());
    }
    for (const char* key : {"dim", "actions", "f0", "w_star", "sigma", "C_b", "C_w", "range_bound"})
        if (!j.contains(key)) throw ConfigError(std::string("instance file missing field: ") + key);

    const int dim = j["dim"].get<int>();
    const auto flat = j["actions"].get<std::vector<double>>();
    if (dim < 1 || flat.empty() || flat.size() % static_cast<std::size_t>(dim) != 0)
        throw ConfigError("instance file: actions array is not k x dim");
    const int k = static_cast<int>(flat.size()) / dim;
    std::vector<Vector> actions(static_cast<std::size_t>(k), Vector(dim));
    for (int i = 0; i < k; ++i)
        for (int d = 0; d < dim; ++d) actions[static_cast<std::size_t>(i)][d] = flat[i * dim + d];

    const auto f0v = j["f0"].get<std::vector<double>>();
    const auto wv = j["w_star"].get<std::vector<double>>();
    if (static_cast<int>(f0v.size()) != k) throw ConfigError("instance file: f0 size != k");
    if (static_cast<int>(wv.size()) != dim) throw ConfigError("instance file: w_star size != dim");
    Vector f0(k), w(dim);
    for (int i = 0; i < k; ++i) f0[i] = f0v[static_cast<std::size_t>(i)];
    for (int d = 0; d < dim; ++d) w[d] = wv[static_cast<std::size_t>(d)];

    InstanceFile out{
        RewardInstance(ActionSet(std::move(actions), j["C_b"].get<double>()), std::move(f0),
                       std::move(w), j["C_w"].get<double>(), j["sigma"].get<double>(),
                       j["range_bound"].get<double>()),
        std::nullopt, std::nullopt};
    if (j.contains("meta")) {
        const auto& meta = j["meta"];
        if (meta.contains("seed")) out.seed = meta["seed"].get<std::uint64_t>();
        if (meta.contains("certificate")) {
            const auto& cj = meta["certificate"];
            MisspecCertificate c;
            c.kind = misspec_kind_from_string(cj.at("kind").get<std::string>());
            if (cj.contains("rho")) c.rho = cj["rho"].get<double>();
            if (cj.contains("eps")) c.eps = cj["eps"].get<double>();
            if (cj.contains("c_star")) c.c_star = cj["c_star"].get<double>();
            if (cj.contains("tolerance")) c.tolerance = cj["tolerance"].get<double>();
            out.certificate = c;
        }
    }
    return out;
}

namespace detail {

inline void write_metadata_comments(std::ostream& os, const RegretTrace& trace) {
    const RunMetadata& m = trace.meta;
    os << "# algo=" << m.algo << " seed=" << m.seed << " horizon=" << m.horizon
       << " noise=" << to_string(m.noise_kind) << " sigma=" << fmt17(m.sigma);
    if (m.delta > 0.0) os << " delta=" << fmt17(m.delta);
    if (m.alpha > 0.0) os << " alpha=" << fmt17(m.alpha);
    os << "\n";
    if (m.certificate.has_value()) {
        const MisspecCertificate& c = *m.certificate;
        os << "# certificate kind=" << to_string(c.kind);
        if (c.rho) os << " rho=" << fmt17(*c.rho);
        if (c.eps) os << " eps=" << fmt17(*c.eps);
        if (c.c_star) os << " c_star=" << fmt17(*c.c_star);
        os << " tolerance=" << fmt17(c.tolerance) << "\n";
    }
    if (m.assumptions.has_value()) {
        const AssumptionReport& a = *m.assumptions;
        os << "# assumptions rho=" << fmt17(a.rho) << " horizon=" << a.horizon
           << " a3_bound=" << fmt17(a.a3_bound) << " a3=" << (a.a3_holds ? 1 : 0)
           << " a4_bound=" << fmt17(a.a4_bound) << " a4=" << (a.a4_holds ? 1 : 0) << "\n";
    }
    for (const PhaseRecord& p : trace.batch_log) {
        os << "# phase index=" << p.phase_index << " m=" << p.m << " support=";
        for (std::size_t i = 0; i < p.support.size(); ++i) {
            if (i) os << "|";
            os << p.support[i];
        }
        os << " planned=" << p.planned_steps << " played=" << p.played_steps
           << " eliminated=" << p.eliminated << " g=" << fmt17(p.g_value)
           << " threshold=" << fmt17(p.threshold) << "\n";
    }
}

}  // namespace detail

/// Delimiter-separated trace: version + metadata comments, a header row, one
/// row per step.  Wall-clock never enters the file, so bytes depend only on
/// (config, seed).
inline void write_trace(const RegretTrace& trace, const std::string& path) {
    std::ostringstream os;
    os << "# format_version " << kTraceFormatVersion << "\n";
    detail::write_metadata_comments(os, trace);
    os << "t,action,reward,inst_regret,cum_regret,switches,phase\n";
    for (const StepRecord& s : trace.steps)
        os << s.t << "," << s.action << "," << fmt17(s.reward) << "," << fmt17(s.inst_regret) << ","
           << fmt17(s.cum_regret) << "," << s.switches << "," << s.phase << "\n";
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open for writing: " + path);
    f << os.str();
}

struct TraceFile {
    std::string algo;
    std::uint64_t seed = 0;
    std::vector<StepRecord> steps;
};

inline TraceFile read_trace(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open trace file: " + path);
    TraceFile out;
    std::string line;
    bool header_seen = false;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto pos = line.find("algo=");
            if (pos != std::string::npos) {
                std::istringstream is(line.substr(pos + 5));
                is >> out.algo;
                const auto spos = line.find("seed=");
                if (spos != std::string::npos) out.seed = std::stoull(line.substr(spos + 5));
            }
            continue;
        }
        if (!header_seen) {  // column header
            header_seen = true;
            continue;
        }
        StepRecord s;
        char c;
        std::istringstream is(line);
        if (!(is >> s.t >> c >> s.action >> c >> s.reward >> c >> s.inst_regret >> c >>
              s.cum_regret >> c >> s.switches >> c >> s.phase))
            throw ConfigError("malformed trace row in " + path + ": " + line);
        out.steps.push_back(s);
    }
    if (!header_seen) throw ConfigError("trace file has no header row: " + path);
    return out;
}

/*
 * Static SVG with one mean cumulative-regret curve per group and a +-1
 * standard-error band.  Data points are embedded as comments so the figure
 * doubles as a record.  Output bytes are a pure function of the inputs.
 */
inline void plot_svg(const std::vector<std::pair<std::string, std::vector<std::vector<double>>>>& groups,
                     const std::string& path) {
    if (groups.empty()) throw ConfigError("plot_svg: no curves given");
    const int width = 800, height = 520, ml = 70, mr = 20, mt = 30, mb = 50;
    std::size_t horizon = 0;
    for (const auto& g : groups)
        for (const auto& c : g.second) horizon = std::max(horizon, c.size());
    if (horizon == 0) throw ConfigError("plot_svg: empty curves");

    // mean and standard error per group, sampled on a fixed grid
    const std::size_t samples = std::min<std::size_t>(horizon, 512);
    struct Band {
        std::vector<long> t;
        std::vector<double> mean, se;
    };
    std::vector<Band> bands;
    double ymax = 0.0;
    for (const auto& [label, curves] : groups) {
        Band b;
        for (std::size_t s = 1; s <= samples; ++s) {
            const std::size_t idx = s * horizon / samples;  // 1-based step
            double m = 0.0, m2 = 0.0;
            int n = 0;
            for (const auto& c : curves) {
                if (c.empty()) continue;
                const double v = c[std::min(idx, c.size()) - 1];
                m += v;
                m2 += v * v;
                ++n;
            }
            if (n == 0) continue;
            m /= n;
            const double var = n > 1 ? std::max(0.0, (m2 - n * m * m) / (n - 1)) : 0.0;
            b.t.push_back(static_cast<long>(idx));
            b.mean.push_back(m);
            b.se.push_back(n > 1 ? std::sqrt(var / n) : 0.0);
            ymax = std::max(ymax, m + (n > 1 ? std::sqrt(var / n) : 0.0));
        }
        bands.push_back(std::move(b));
    }
    if (ymax <= 0.0) ymax = 1.0;

    const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
    auto xpix = [&](double t) {
        return ml + (width - ml - mr) * (t / static_cast<double>(horizon));
    };
    auto ypix = [&](double v) { return height - mb - (height - mt - mb) * (v / ymax); };
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.2f", v);
        return std::string(buf);
    };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
       << "\">\n";
    os << "<!-- cumulative regret vs t; mean +- standard error across seeds -->\n";
    os << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    os << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\"" << width - mr << "\" y2=\""
       << height - mb << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << height - mb
       << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << (ml + width - mr) / 2 << "\" y=\"" << height - 12
       << "\" font-size=\"14\" text-anchor=\"middle\">t</text>\n";
    os << "<text x=\"18\" y=\"" << (mt + height - mb) / 2
       << "\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
       << (mt + height - mb) / 2 << ")\">cumulative regret</text>\n";
    os << "<text x=\"" << ml << "\" y=\"" << mt - 8 << "\" font-size=\"12\">ymax=" << fmt17(ymax)
       << " horizon=" << horizon << "</text>\n";

    for (std::size_t gi = 0; gi < bands.size(); ++gi) {
        const Band& b = bands[gi];
        const char* color = colors[gi % 6];
        os << "<!-- group " << groups[gi].first << " -->\n";
        for (std::size_t i = 0; i < b.t.size(); ++i)
            os << "<!-- data t=" << b.t[i] << " mean=" << fmt17(b.mean[i])
               << " se=" << fmt17(b.se[i]) << " -->\n";
        // band polygon
        os << "<polygon fill=\"" << color << "\" fill-opacity=\"0.15\" stroke=\"none\" points=\"";
        for (std::size_t i = 0; i < b.t.size(); ++i)
            os << num(xpix(b.t[i])) << "," << num(ypix(b.mean[i] + b.se[i])) << " ";
        for (std::size_t i = b.t.size(); i-- > 0;)
            os << num(xpix(b.t[i])) << "," << num(ypix(std::max(0.0, b.mean[i] - b.se[i]))) << " ";
        os << "\"/>\n";
        // mean polyline
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < b.t.size(); ++i)
            os << num(xpix(b.t[i])) << "," << num(ypix(b.mean[i])) << " ";
        os << "\"/>\n";
        os << "<text x=\"" << width - mr - 150 << "\" y=\"" << mt + 18 * (gi + 1)
           << "\" font-size=\"12\" fill=\"" << color << "\">" << groups[gi].first << "</text>\n";
    }
    os << "</svg>\n";
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open for writing: " + path);
    f << os.str();
}

}  // namespace gamband
