#include "dnr/io.hpp"

#include "dnr/error.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace dnr {

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorKind::InvalidInput, what); }

double finite_number(const Json& v, const std::string& where) {
    if (!v.is_number()) invalid(where + ": expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) invalid(where + ": non-finite value");
    return x;
}

}  // namespace

ComplexMatrix parse_matrix(std::string_view text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::exception& e) {
        invalid(std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) invalid("matrix file must be a JSON object");
    if (!doc.contains("n") || !doc["n"].is_number_integer()) invalid("\"n\" must be an integer");
    const long long n = doc["n"].get<long long>();
    if (n < 1 || n > 64) invalid("\"n\" must be in [1, 64]");
    if (!doc.contains("entries") || !doc["entries"].is_array()) invalid("\"entries\" must be an array");
    const Json& rows = doc["entries"];
    if (rows.size() != static_cast<std::size_t>(n)) invalid("\"entries\" must have n rows");

    ComplexMatrix t(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < t.size(); ++i) {
        const Json& row = rows[i];
        if (!row.is_array() || row.size() != t.size()) invalid("row " + std::to_string(i) + " must have n cells");
        for (std::size_t j = 0; j < t.size(); ++j) {
            const Json& cell = row[j];
            const std::string where = "entry (" + std::to_string(i) + ", " + std::to_string(j) + ")";
            if (!cell.is_array() || cell.size() != 2) invalid(where + ": expected [re, im]");
            t(i, j) = {finite_number(cell[0], where), finite_number(cell[1], where)};
        }
    }
    return t;
}

ComplexMatrix read_matrix_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) invalid("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_matrix(ss.str());
}

std::string serialize_matrix(const ComplexMatrix& t) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < t.size(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < t.size(); ++j) row.push_back({t(i, j).real(), t(i, j).imag()});
        rows.push_back(std::move(row));
    }
    Json doc;
    doc["n"] = t.size();
    doc["entries"] = std::move(rows);
    return doc.dump();
}

Json complex_pairs(std::span<const Complex> z) {
    Json out = Json::array();
    for (Complex c : z) out.push_back({c.real(), c.imag()});
    return out;
}

Json range_summary(const RangeResult& r, std::uint64_t seed) {
    Json j;
    j["seed"] = seed;
    j["rho"] = r.rho.rho();
    j["r"] = r.rho.r();
    j["nu"] = r.nu;
    j["n_samples"] = r.stats.n_samples;
    j["n_feasible"] = r.stats.n_feasible;
    j["hull_vertices"] = complex_pairs(r.region.vertices());
    j["budget_exceeded"] = r.budget_exceeded;
    return j;
}

Json certificate_json(const MembershipCertificate& c, const RhoParam& rho, std::uint64_t seed) {
    Json j;
    j["seed"] = seed;
    j["rho"] = rho.rho();
    j["verdict"] = to_string(c.verdict);
    j["margin"] = c.margin;
    j["boundary"] = c.boundary;
    j["witness_vector"] = complex_pairs(c.witness);
    j["worst_angle"] = c.worst_angle;
    j["radius"] = c.radius;
    j["measure_min_eig"] = c.measure_min_eig ? Json(*c.measure_min_eig) : Json(nullptr);
    return j;
}

Json psi_json(const PsiEstimate& e, std::uint64_t seed) {
    Json j;
    j["seed"] = seed;
    j["rho"] = e.rho;
    j["degree"] = e.degree;
    j["ratio"] = e.ratio;
    j["coefficients"] = complex_pairs(e.best.coefficients());
    j["boundary_points_used"] = e.boundary_points_used;
    return j;
}

}  // namespace dnr
