#include "paritylock/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "paritylock/error.hpp"

namespace paritylock {

namespace {

json pair_of(cplx z) { return json::array({z.real(), z.imag()}); }

cplx cplx_of(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw Error(ErrorKind::ParseError, "complex entries must be [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

int n_max_of(const json& j) {
    if (!j.is_object() || !j.contains("n_max") || !j["n_max"].is_number_integer())
        throw Error(ErrorKind::ParseError, "missing integer n_max");
    return j["n_max"].get<int>();
}

std::string fmt(double x) {
    char buf[32];
    auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

double parse_double(const std::string& s, int line) {
    double v = 0.0;
    const char* b = s.data();
    const char* e = b + s.size();
    while (b < e && *b == ' ') ++b;
    while (e > b && (e[-1] == ' ' || e[-1] == '\r')) --e;
    auto r = std::from_chars(b, e, v);
    if (r.ec != std::errc() || r.ptr != e || b == e)
        throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": not a number: '" + s + "'");
    return v;
}

}  // namespace

json to_json(const JointState& psi) {
    json a = json::array();
    for (cplx z : psi.amps()) a.push_back(pair_of(z));
    return {{"n_max", psi.n_max()}, {"amps", a}};
}

JointState state_from_json(const json& j) {
    const int n_max = n_max_of(j);
    if (!j.contains("amps") || !j["amps"].is_array()) throw Error(ErrorKind::ParseError, "missing amps array");
    std::vector<cplx> a;
    for (const auto& e : j["amps"]) a.push_back(cplx_of(e));
    return JointState(n_max, std::move(a));
}

json to_json(const JointDensity& rho) {
    const auto& m = rho.matrix();
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(pair_of(m(r, c)));
        rows.push_back(row);
    }
    return {{"n_max", rho.n_max()}, {"rho", rows}};
}

JointDensity density_from_json(const json& j) {
    const int n_max = n_max_of(j);
    if (!j.contains("rho") || !j["rho"].is_array()) throw Error(ErrorKind::ParseError, "missing rho array");
    const auto& rows = j["rho"];
    const auto d = static_cast<Eigen::Index>(rows.size());
    Eigen::MatrixXcd m(d, d);
    for (Eigen::Index r = 0; r < d; ++r) {
        if (!rows[r].is_array() || static_cast<Eigen::Index>(rows[r].size()) != d)
            throw Error(ErrorKind::ParseError, "rho must be square");
        for (Eigen::Index c = 0; c < d; ++c) m(r, c) = cplx_of(rows[r][c]);
    }
    return JointDensity(n_max, std::move(m));
}

json to_json(const RabiModel& m) {
    if (m.type == RabiModel::Type::LambDicke) return {{"type", "lamb-dicke"}};
    return {{"type", "beyond-ld"}, {"eta", m.eta}};
}

RabiModel rabi_model_from_json(const json& j) {
    const std::string t = j.value("type", "lamb-dicke");
    if (t == "lamb-dicke") return RabiModel::lamb_dicke();
    if (t == "beyond-ld") {
        const double eta = j.value("eta", -1.0);
        if (!(eta > 0)) throw Error(ErrorKind::InvalidArgument, "beyond-ld model needs eta > 0");
        return RabiModel::beyond_ld(eta);
    }
    throw Error(ErrorKind::ParseError, "unknown rabi_model type '" + t + "'");
}

json to_json(const PulseSpec& p) {
    return {{"kind", to_string(p.kind)}, {"area", p.area}, {"phase", p.phase}, {"rabi_model", to_json(p.rabi_model)}};
}

PulseSpec pulse_from_json(const json& j) {
    try {
        return PulseSpec::make(pulse_kind_from_string(j.at("kind").get<std::string>()), j.at("area").get<double>(),
                               j.value("phase", 0.0),
                               j.contains("rabi_model") ? rabi_model_from_json(j["rabi_model"]) : RabiModel{});
    } catch (const json::exception& e) {
        throw Error(ErrorKind::ParseError, std::string("pulse: ") + e.what());
    }
}

json to_json(const DecoherenceModel& m) { return {{"kind", to_string(m.kind)}, {"w", m.w}}; }

DecoherenceModel model_from_json(const json& j) {
    try {
        return DecoherenceModel::make(decoherence_kind_from_string(j.at("kind").get<std::string>()), j.value("w", 1.0));
    } catch (const json::exception& e) {
        throw Error(ErrorKind::ParseError, std::string("model: ") + e.what());
    }
}

std::string config_hash(const json& config) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : config.dump()) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

json OutputHeader::to_json() const {
    return {{"artifact", "paritylock"}, {"version", kVersion}, {"command", command},
            {"config_hash", config_hash(config)}, {"seed", seed}, {"config", config}};
}

void write_csv(const std::filesystem::path& path, const OutputHeader& header, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorKind::InvalidArgument, "cannot write " + path.string());
    f << "# paritylock " << kVersion << " " << header.command << "\n";
    f << "# config_hash: " << config_hash(header.config) << "\n";
    f << "# seed: " << header.seed << "\n";
    f << "# config: " << header.config.dump() << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i) f << (i ? "," : "") << columns[i];
    f << "\n";
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) f << (i ? "," : "") << fmt(r[i]);
        f << "\n";
    }
}

void write_json(const std::filesystem::path& path, const OutputHeader& header, json body) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorKind::InvalidArgument, "cannot write " + path.string());
    json out = {{"header", header.to_json()}};
    for (auto& [k, v] : body.items()) out[k] = v;
    f << out.dump(2) << "\n";
}

RabiFlopRecord parse_flop_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool have_header = false;
    RabiFlopRecord rec;
    int shots = -1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (!have_header) {
            auto trim = [](std::string s) {
                s.erase(0, s.find_first_not_of(' '));
                s.erase(s.find_last_not_of(' ') + 1);
                return s;
            };
            if (cells.size() != 3 || trim(cells[0]) != "time_ms" || trim(cells[1]) != "pg" || trim(cells[2]) != "shots")
                throw Error(ErrorKind::ParseError,
                            "line " + std::to_string(lineno) + ": expected header 'time_ms,pg,shots'");
            have_header = true;
            continue;
        }
        if (cells.size() != 3)
            throw Error(ErrorKind::ParseError,
                        "line " + std::to_string(lineno) + ": expected 3 fields, got " + std::to_string(cells.size()));
        const double t = parse_double(cells[0], lineno);
        const double pg = parse_double(cells[1], lineno);
        const double s = parse_double(cells[2], lineno);
        if (!(pg >= 0.0 && pg <= 1.0))
            throw Error(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": pg outside [0, 1]");
        if (s != std::floor(s) || s < 1)
            throw Error(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": shots must be a positive whole number");
        if (shots < 0 || s < shots) shots = static_cast<int>(s);
        rec.times.push_back(t);
        rec.pg.push_back(pg);
    }
    if (!have_header || rec.times.empty())
        throw Error(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": no data rows");
    rec.shots_per_point = shots;
    rec.validate();
    return rec;
}

RabiFlopRecord read_flop_csv(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorKind::InvalidArgument, "cannot read " + path.string());
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_flop_csv(ss.str());
}

void write_flop_csv(const std::filesystem::path& path, const OutputHeader& header, const RabiFlopRecord& rec) {
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < rec.times.size(); ++i)
        rows.push_back({rec.times[i], rec.pg[i], double(rec.shots_per_point)});
    write_csv(path, header, {"time_ms", "pg", "shots"}, rows);
}

}  // namespace paritylock
