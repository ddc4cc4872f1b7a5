#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "swipt/eh_model.hpp"

namespace swipt {

namespace {

double unit_scale(const std::string& unit) {
    if (unit == "W") return 1.0;
    if (unit == "mW") return 1e-3;
    if (unit == "uW" || unit == "µW") return 1e-6;
    throw std::invalid_argument("EH model file: unknown unit '" + unit + "'");
}

std::vector<double> parse_numbers(std::istringstream& in, const std::string& key) {
    std::vector<double> out;
    double v;
    while (in >> v) out.push_back(v);
    if (out.empty()) {
        throw std::invalid_argument("EH model file: no values for key '" + key + "'");
    }
    return out;
}

}  // namespace

PiecewiseEHModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open EH model file: " + path);

    double scale = 1.0;
    int n_segments = -1;
    std::vector<double> rho_bp, b, alpha, beta, theta;

    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key)) continue;
        if (key == "unit") {
            std::string u;
            ls >> u;
            scale = unit_scale(u);
        } else if (key == "n_segments") {
            ls >> n_segments;
        } else if (key == "rho_breakpoints") {
            rho_bp = parse_numbers(ls, key);
        } else if (key == "B") {
            b = parse_numbers(ls, key);
        } else if (key == "alpha") {
            alpha = parse_numbers(ls, key);
        } else if (key == "beta") {
            beta = parse_numbers(ls, key);
        } else if (key == "theta") {
            theta = parse_numbers(ls, key);
        } else {
            throw std::invalid_argument("EH model file: unknown key '" + key + "'");
        }
    }

    if (n_segments < 1) throw std::invalid_argument("EH model file: missing n_segments");
    const auto n = static_cast<std::size_t>(n_segments);
    if (rho_bp.size() != n || b.size() != n || alpha.size() != n || beta.size() != n ||
        theta.size() != n) {
        throw std::invalid_argument(
            "EH model file: rho_breakpoints/B/alpha/beta/theta must each list one value "
            "per segment");
    }

    std::vector<LogisticSegment> segs(n);
    double rho_start = 0.0;
    double phi = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        segs[i].asymptote = b[i] * scale;
        segs[i].start_value = phi;
        segs[i].alpha = alpha[i];
        segs[i].beta = beta[i];
        // theta is expressed in the declared unit system (1/unit^alpha).
        segs[i].theta = theta[i] * std::pow(scale, -alpha[i]);
        segs[i].rho_start = rho_start;
        segs[i].rho_end = rho_bp[i] * scale;
        phi = segs[i].value(segs[i].rho_end);
        rho_start = segs[i].rho_end;
    }
    return PiecewiseEHModel(std::move(segs));
}

void save_model(const PiecewiseEHModel& model, const std::string& path,
                const std::string& comment) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write EH model file: " + path);
    out << std::setprecision(17);
    if (!comment.empty()) out << "# " << comment << "\n";
    out << "unit W\n";
    out << "n_segments " << model.segment_count() << "\n";
    out << "rho_breakpoints";
    for (const auto& s : model.segments()) out << ' ' << s.rho_end;
    out << "\nB";
    for (const auto& s : model.segments()) out << ' ' << s.asymptote;
    out << "\nalpha";
    for (const auto& s : model.segments()) out << ' ' << s.alpha;
    out << "\nbeta";
    for (const auto& s : model.segments()) out << ' ' << s.beta;
    out << "\ntheta";
    for (const auto& s : model.segments()) out << ' ' << s.theta;
    out << "\n";
}

EHSampleSet load_samples(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open sample file: " + path);
    EHSampleSet set;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        for (char& c : line) {
            if (c == ',') c = ' ';
        }
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first)) continue;
        char* end = nullptr;
        const double rho = std::strtod(first.c_str(), &end);
        if (end == first.c_str() || *end != '\0') {
            if (lineno == 1 || set.rho.empty()) continue;  // header line
            throw std::invalid_argument("sample file: malformed line " + std::to_string(lineno));
        }
        double harvested;
        if (!(ls >> harvested)) {
            throw std::invalid_argument("sample file: missing harvested value on line " +
                                        std::to_string(lineno));
        }
        set.rho.push_back(rho);
        set.harvested.push_back(harvested);
    }
    if (set.rho.empty()) throw std::invalid_argument("sample file: no data rows in " + path);
    return set;
}

void save_samples(const EHSampleSet& samples, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write sample file: " + path);
    out << std::setprecision(17);
    out << "rho_W,harvested_W\n";
    for (std::size_t i = 0; i < samples.rho.size(); ++i) {
        out << samples.rho[i] << ',' << samples.harvested[i] << "\n";
    }
}

}  // namespace swipt
