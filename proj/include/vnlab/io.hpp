#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

#include "json.hpp"

#include "vnlab/bounds.hpp"
#include "vnlab/norm.hpp"
#include "vnlab/polynomial.hpp"
#include "vnlab/steiner.hpp"

namespace vnlab::io {

using Json = nlohmann::ordered_json;

/// A file could not be read or written; the message names the path.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// {"n", "k", "terms": [{"indices", "re", "im"}]} with terms in monomial order.
Json polynomial_to_json(const poly::HomogeneousPolynomial& p);
poly::HomogeneousPolynomial polynomial_from_json(const Json& j);

/// Parses sums like "z1z2 + z3z4", "2*z1^2*z3 - 0.5 z2 z4 z5". The variable
/// count is the largest index used, or `n` when that is larger.
poly::HomogeneousPolynomial parse_polynomial(std::string_view text, int n = 0);

Json system_to_json(const steiner::PartialSteinerSystem& system);
Json norm_estimate_to_json(const norm::NormEstimate& est);
Json rate_to_json(const std::optional<bounds::Rate>& rate);
Json exponents_to_json(const bounds::ReferenceExponents& e);

/// One line per block: its points, then the sign +1 or -1.
std::map<steiner::Block, int> read_signs(std::istream& in);
void write_signs(std::ostream& out, const steiner::PartialSteinerSystem& system, const poly::HomogeneousPolynomial& p);

/// Polynomial with coefficient sign_J on each listed block.
poly::HomogeneousPolynomial polynomial_from_signs(const steiner::PartialSteinerSystem& system,
                                                  const std::map<steiner::Block, int>& signs);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

steiner::PartialSteinerSystem load_system(const std::filesystem::path& path);

/// Git blob id: SHA-1 of "blob <size>\0" followed by the bytes, in hex.
std::string content_hash(std::string_view bytes);

}  // namespace vnlab::io
