#include "scatterlab/io.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace scatterlab {

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

bool ends_with(const std::string& s, const std::string& suf) {
    return s.size() >= suf.size() && s.compare(s.size() - suf.size(), suf.size(), suf) == 0;
}

void require_finite(const rvec& x, const std::string& path) {
    for (double v : x)
        if (!std::isfinite(v))
            throw std::invalid_argument("input contains non-finite values: " + path);
}

}  // namespace

rvec load_signal(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open input: " + path);
    if (ends_with(path, ".f64")) {
        in.seekg(0, std::ios::end);
        const auto bytes = static_cast<std::size_t>(in.tellg());
        in.seekg(0);
        if (bytes % sizeof(double) != 0)
            throw std::invalid_argument("raw input is not a whole number of doubles: " + path);
        rvec x(bytes / sizeof(double));
        in.read(reinterpret_cast<char*>(x.data()), static_cast<std::streamsize>(bytes));
        if (!in) throw std::invalid_argument("short read: " + path);
        require_finite(x, path);
        return x;
    }
    rvec x;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::size_t pos = 0;
        double v;
        try {
            v = std::stod(line, &pos);
        } catch (const std::exception&) {
            throw std::invalid_argument("bad sample line in " + path + ": " + line);
        }
        while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
        if (pos != line.size())
            throw std::invalid_argument("bad sample line in " + path + ": " + line);
        x.push_back(v);
    }
    if (x.empty()) throw std::invalid_argument("empty input: " + path);
    require_finite(x, path);
    return x;
}

void save_f64(const std::string& path, const rvec& x) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path);
    out.write(reinterpret_cast<const char*>(x.data()),
              static_cast<std::streamsize>(x.size() * sizeof(double)));
    if (!out) throw std::runtime_error("short write: " + path);
}

void save_f64_complex(const std::string& path, const cvec& x) {
    rvec flat(2 * x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        flat[2 * i] = x[i].real();
        flat[2 * i + 1] = x[i].imag();
    }
    save_f64(path, flat);
}

std::string policy_name(Policy p) {
    switch (p) {
        case Policy::All: return "all";
        case Policy::Dec: return "dec";
        case Policy::DecStrict: return "dec-strict";
    }
    return "all";
}

Policy parse_policy(const std::string& s) {
    if (s == "all") return Policy::All;
    if (s == "dec" || s == "frequency-decreasing") return Policy::Dec;
    if (s == "dec-strict") return Policy::DecStrict;
    throw std::invalid_argument("unknown policy: " + s);
}

std::string scattering_to_json(const ScatteringOutput& out, bool include_signals) {
    nlohmann::ordered_json j;
    j["J"] = out.J;
    j["m_max"] = out.m_max;
    j["policy"] = policy_name(out.policy);
    j["paths"] = nlohmann::ordered_json::array();
    for (const auto& [p, pd] : out.coeffs) {
        nlohmann::ordered_json rec;
        rec["p"] = path_to_string(p);
        rec["s_norm"] = pd.s_norm;
        rec["u_norm"] = pd.u_norm;
        if (include_signals) {
            auto sig = nlohmann::ordered_json::array();
            for (const cd& v : pd.s_signal) sig.push_back({v.real(), v.imag()});
            rec["signal"] = std::move(sig);
        }
        j["paths"].push_back(std::move(rec));
    }
    j["layer_energy"] = out.layer_energy;
    j["residual_energy"] = out.residual_energy;
    return j.dump(2) + "\n";
}

std::string curve_to_csv(const std::vector<CurveRecord>& recs, const cvec& fhat_unitary, int n) {
    std::ostringstream os;
    os << "omega_start,omega_end,value,path,length,fhat_abs\n";
    for (const CurveRecord& r : recs) {
        double fa = 0.0;
        if (!fhat_unitary.empty()) {
            long bin = std::lround(0.5 * (r.omega_start + r.omega_end) * n / 2.0);
            if (bin > n / 2) bin = n - bin;
            if (bin < 0) bin = 0;
            if (bin > n / 2) bin = n / 2;
            fa = std::abs(fhat_unitary[static_cast<std::size_t>(bin)]);
        }
        os << num(r.omega_start) << ',' << num(r.omega_end) << ',' << num(r.value) << ','
           << path_to_string(r.path) << ',' << r.length << ',' << num(fa) << '\n';
    }
    return os.str();
}

std::string ledger_to_csv(const ScatteringOutput& out) {
    std::ostringstream os;
    os << "m,layer_energy,residual_before,residual_after\n";
    for (int m = 0; m <= out.m_max; ++m)
        os << m << ',' << num(out.layer_energy[m]) << ',' << num(out.residual_energy[m]) << ','
           << num(out.residual_energy[m + 1]) << '\n';
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
    if (!out) throw std::runtime_error("short write: " + path);
}

std::string path_slug(const Path& p) {
    if (p.empty()) return "empty";
    std::string s;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) s += '_';
        if (p[i] < 0) {
            s += 'm';
            s += std::to_string(-p[i]);
        } else {
            s += std::to_string(p[i]);
        }
    }
    return s;
}

}  // namespace scatterlab
