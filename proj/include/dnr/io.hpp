#pragma once

#include "dnr/deformed_range.hpp"
#include "dnr/dilation.hpp"
#include "dnr/linalg.hpp"
#include "dnr/spectral_constants.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>

namespace dnr {

using Json = nlohmann::ordered_json;

/// Matrix file: {"n": int, "entries": [[[re, im], ...], ...]}, row-major.
/// Throws InvalidInput on malformed text, wrong shape or non-finite values.
ComplexMatrix parse_matrix(std::string_view text);
ComplexMatrix read_matrix_file(const std::filesystem::path& path);
std::string serialize_matrix(const ComplexMatrix& t);

/// [[re, im], ...]
Json complex_pairs(std::span<const Complex> z);

Json range_summary(const RangeResult& r, std::uint64_t seed);
Json certificate_json(const MembershipCertificate& c, const RhoParam& rho, std::uint64_t seed);
Json psi_json(const PsiEstimate& e, std::uint64_t seed);

}  // namespace dnr
