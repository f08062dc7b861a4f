#pragma once

#include "tva/rational.hpp"

#include "json.hpp"

#include <array>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tva {

/// Raised for structurally invalid input (bad indices, dimension mismatch).
class SpecError : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

struct BracketTerm {
	int index;
	Rational coeff;
};

/// Dense coordinate vector in g.
using GVector = std::vector<Rational>;

/// A finite-dimensional Lie algebra given by structure constants together
/// with a symmetric invariant bilinear form (possibly degenerate).
class LieAlgebraSpec {
public:
	LieAlgebraSpec() = default;
	LieAlgebraSpec(std::vector<std::string> basis, std::vector<std::vector<Rational>> form);

	/// Reads the JSON layout
	///   {"dim": n, "basis": [...], "brackets": [{"i":..,"j":..,"coeffs":{..}}], "form": [[..]]}.
	/// Entries i, j and coefficient keys may be basis names or indices. A
	/// bracket [b_j, b_i] that the file never mentions is filled in as
	/// -[b_i, b_j]; a pair the file lists in both orders is taken verbatim.
	static LieAlgebraSpec from_json(const nlohmann::json& j);
	static LieAlgebraSpec from_file(const std::filesystem::path& path);
	nlohmann::json to_json() const;

	int dim() const { return static_cast<int>(basis_.size()); }
	const std::vector<std::string>& basis() const { return basis_; }
	const std::string& name(int i) const { return basis_.at(i); }
	int index_of(std::string_view name) const;

	/// Sparse [b_i, b_j].
	const std::vector<BracketTerm>& bracket(int i, int j) const { return brackets_[i * dim() + j]; }
	const Rational& form(int i, int j) const { return form_[i][j]; }
	const std::vector<std::vector<Rational>>& form_matrix() const { return form_; }

	void set_bracket(int i, int j, std::vector<BracketTerm> terms);
	void set_form(int i, int j, Rational value) { form_.at(i).at(j) = std::move(value); }

	GVector basis_vector(int i) const;

private:
	std::vector<std::string> basis_;
	std::vector<std::vector<BracketTerm>> brackets_;
	std::vector<std::vector<Rational>> form_;
};

struct ValidationReport {
	bool ok = true;
	std::string identity;  // "antisymmetry", "jacobi", "form-symmetry", "invariance"
	std::vector<int> triple;
	std::string detail;
};

/// Checks antisymmetry, the Jacobi identity, symmetry and invariance of the
/// form on every basis pair/triple; reports the first violation found in
/// lexicographic order. Throws SpecError on a dimension mismatch.
ValidationReport validate_lie_spec(const LieAlgebraSpec& spec);

/// Bilinear extension of the structure constants.
GVector bracket_g(const LieAlgebraSpec& spec, const GVector& a, const GVector& b);

/// The invariant form on coordinate vectors.
Rational form_g(const LieAlgebraSpec& spec, const GVector& a, const GVector& b);

}  // namespace tva
