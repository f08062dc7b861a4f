#include "tva/lie_algebra.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace tva {

namespace {

using nlohmann::json;

Rational rational_from_json(const json& v)
{
	if (v.is_number_integer())
		return Rational(v.get<long>());
	if (v.is_string())
		return parse_rational(v.get<std::string>());
	throw SpecError("expected an integer or a \"p/q\" string, got " + v.dump());
}

int index_from_json(const LieAlgebraSpec& spec, const json& v)
{
	if (v.is_number_integer()) {
		int i = v.get<int>();
		if (i < 0 || i >= spec.dim())
			throw SpecError("basis index " + std::to_string(i) + " out of range");
		return i;
	}
	if (v.is_string())
		return spec.index_of(v.get<std::string>());
	throw SpecError("expected a basis name or index, got " + v.dump());
}

int index_from_key(const LieAlgebraSpec& spec, const std::string& key)
{
	try {
		return spec.index_of(key);
	} catch (const SpecError&) {
	}
	std::size_t pos = 0;
	int i = -1;
	try {
		i = std::stoi(key, &pos);
	} catch (const std::exception&) {
		throw SpecError("unknown basis element '" + key + "'");
	}
	if (pos != key.size() || i < 0 || i >= spec.dim())
		throw SpecError("unknown basis element '" + key + "'");
	return i;
}

std::string triple_names(const LieAlgebraSpec& spec, int a, int b, int c)
{
	return "(" + spec.name(a) + "," + spec.name(b) + "," + spec.name(c) + ")";
}

}  // namespace

LieAlgebraSpec::LieAlgebraSpec(std::vector<std::string> basis, std::vector<std::vector<Rational>> form)
    : basis_(std::move(basis)), brackets_(basis_.size() * basis_.size()), form_(std::move(form))
{
	if (basis_.empty())
		throw SpecError("Lie algebra must have positive dimension");
	std::set<std::string> seen(basis_.begin(), basis_.end());
	if (seen.size() != basis_.size())
		throw SpecError("duplicate basis names");
	if (seen.count("1") || seen.count("vac"))
		throw SpecError("basis names '1' and 'vac' are reserved for the vacuum");
}

int LieAlgebraSpec::index_of(std::string_view name) const
{
	for (int i = 0; i < dim(); ++i)
		if (basis_[i] == name)
			return i;
	throw SpecError("unknown basis element '" + std::string(name) + "'");
}

void LieAlgebraSpec::set_bracket(int i, int j, std::vector<BracketTerm> terms)
{
	if (i < 0 || j < 0 || i >= dim() || j >= dim())
		throw SpecError("bracket index out of range");
	std::vector<BracketTerm> cleaned;
	for (auto& t : terms) {
		if (t.index < 0 || t.index >= dim())
			throw SpecError("bracket coefficient index out of range");
		if (t.coeff != 0)
			cleaned.push_back(std::move(t));
	}
	brackets_[i * dim() + j] = std::move(cleaned);
}

GVector LieAlgebraSpec::basis_vector(int i) const
{
	GVector v(dim());
	v.at(i) = 1;
	return v;
}

LieAlgebraSpec LieAlgebraSpec::from_json(const json& j)
{
	if (!j.is_object())
		throw SpecError("Lie algebra spec must be a JSON object");
	for (const char* key : {"dim", "basis", "form"})
		if (!j.contains(key))
			throw SpecError(std::string("missing field '") + key + "'");
	int dim = j.at("dim").get<int>();
	auto basis = j.at("basis").get<std::vector<std::string>>();
	if (static_cast<int>(basis.size()) != dim)
		throw SpecError("dimension mismatch: dim=" + std::to_string(dim) + " but " +
		                std::to_string(basis.size()) + " basis names");
	const json& form_j = j.at("form");
	if (!form_j.is_array() || static_cast<int>(form_j.size()) != dim)
		throw SpecError("dimension mismatch: form matrix must be " + std::to_string(dim) + "x" +
		                std::to_string(dim));
	std::vector<std::vector<Rational>> form(dim, std::vector<Rational>(dim));
	for (int a = 0; a < dim; ++a) {
		if (!form_j[a].is_array() || static_cast<int>(form_j[a].size()) != dim)
			throw SpecError("dimension mismatch: form row " + std::to_string(a) + " must have " +
			                std::to_string(dim) + " entries");
		for (int b = 0; b < dim; ++b)
			form[a][b] = rational_from_json(form_j[a][b]);
	}
	LieAlgebraSpec spec(std::move(basis), std::move(form));

	std::set<std::pair<int, int>> given;
	if (j.contains("brackets")) {
		for (const auto& entry : j.at("brackets")) {
			int a = index_from_json(spec, entry.at("i"));
			int b = index_from_json(spec, entry.at("j"));
			std::vector<BracketTerm> terms;
			for (const auto& [key, value] : entry.at("coeffs").items())
				terms.push_back({index_from_key(spec, key), rational_from_json(value)});
			if (!given.insert({a, b}).second)
				throw SpecError("bracket (" + spec.name(a) + "," + spec.name(b) + ") listed twice");
			spec.set_bracket(a, b, std::move(terms));
		}
	}
	for (auto [a, b] : given) {
		if (given.count({b, a}))
			continue;
		std::vector<BracketTerm> neg;
		for (const auto& t : spec.bracket(a, b))
			neg.push_back({t.index, -t.coeff});
		spec.set_bracket(b, a, std::move(neg));
	}
	return spec;
}

LieAlgebraSpec LieAlgebraSpec::from_file(const std::filesystem::path& path)
{
	std::ifstream in(path);
	if (!in)
		throw SpecError("cannot open Lie algebra spec '" + path.string() + "'");
	json j = json::parse(in);  // json::parse_error carries the byte position
	return from_json(j);
}

nlohmann::json LieAlgebraSpec::to_json() const
{
	json j;
	j["dim"] = dim();
	j["basis"] = basis_;
	json brackets = json::array();
	for (int a = 0; a < dim(); ++a)
		for (int b = 0; b < dim(); ++b) {
			const auto& terms = bracket(a, b);
			if (terms.empty())
				continue;
			json coeffs = json::object();
			for (const auto& t : terms)
				coeffs[basis_[t.index]] = to_string(t.coeff);
			brackets.push_back({{"i", basis_[a]}, {"j", basis_[b]}, {"coeffs", coeffs}});
		}
	j["brackets"] = brackets;
	json form = json::array();
	for (const auto& row : form_) {
		json r = json::array();
		for (const auto& v : row)
			r.push_back(to_string(v));
		form.push_back(r);
	}
	j["form"] = form;
	return j;
}

GVector bracket_g(const LieAlgebraSpec& spec, const GVector& a, const GVector& b)
{
	const int n = spec.dim();
	if (static_cast<int>(a.size()) != n || static_cast<int>(b.size()) != n)
		throw SpecError("bracket_g: vector length differs from dim");
	GVector out(n);
	for (int i = 0; i < n; ++i) {
		if (a[i] == 0)
			continue;
		for (int j = 0; j < n; ++j) {
			if (b[j] == 0)
				continue;
			for (const auto& t : spec.bracket(i, j))
				out[t.index] += a[i] * b[j] * t.coeff;
		}
	}
	return out;
}

Rational form_g(const LieAlgebraSpec& spec, const GVector& a, const GVector& b)
{
	Rational s = 0;
	for (int i = 0; i < spec.dim(); ++i)
		for (int j = 0; j < spec.dim(); ++j)
			s += a[i] * spec.form(i, j) * b[j];
	return s;
}

ValidationReport validate_lie_spec(const LieAlgebraSpec& spec)
{
	const int n = spec.dim();
	const auto& form = spec.form_matrix();
	if (static_cast<int>(form.size()) != n)
		throw SpecError("dimension mismatch between structure constants and form matrix");
	for (const auto& row : form)
		if (static_cast<int>(row.size()) != n)
			throw SpecError("dimension mismatch between structure constants and form matrix");

	auto basis = [&](int i) { return spec.basis_vector(i); };
	auto fail = [&](std::string id, std::vector<int> triple, std::string detail) {
		return ValidationReport{false, std::move(id), std::move(triple), std::move(detail)};
	};
	auto vec_str = [&](const GVector& v) {
		std::ostringstream os;
		bool first = true;
		for (int i = 0; i < n; ++i) {
			if (v[i] == 0)
				continue;
			os << (first ? "" : " + ") << to_string(v[i]) << "*" << spec.name(i);
			first = false;
		}
		return first ? std::string("0") : os.str();
	};

	for (int a = 0; a < n; ++a)
		for (int b = 0; b < n; ++b) {
			GVector ab = bracket_g(spec, basis(a), basis(b));
			GVector ba = bracket_g(spec, basis(b), basis(a));
			for (int i = 0; i < n; ++i)
				if (ab[i] != -ba[i])
					return fail("antisymmetry", {a, b},
					            "[" + spec.name(a) + "," + spec.name(b) + "] = " + vec_str(ab) + " but [" +
					                spec.name(b) + "," + spec.name(a) + "] = " + vec_str(ba));
		}
	for (int a = 0; a < n; ++a)
		for (int b = 0; b < n; ++b)
			for (int c = 0; c < n; ++c) {
				GVector s = bracket_g(spec, bracket_g(spec, basis(a), basis(b)), basis(c));
				GVector t = bracket_g(spec, bracket_g(spec, basis(b), basis(c)), basis(a));
				GVector u = bracket_g(spec, bracket_g(spec, basis(c), basis(a)), basis(b));
				for (int i = 0; i < n; ++i)
					s[i] += t[i] + u[i];
				for (int i = 0; i < n; ++i)
					if (s[i] != 0)
						return fail("jacobi", {a, b, c},
						            "Jacobi sum at " + triple_names(spec, a, b, c) + " = " + vec_str(s));
			}
	for (int a = 0; a < n; ++a)
		for (int b = 0; b < n; ++b)
			if (form[a][b] != form[b][a])
				return fail("form-symmetry", {a, b},
				            "<" + spec.name(a) + "," + spec.name(b) + "> = " + to_string(form[a][b]) + " but <" +
				                spec.name(b) + "," + spec.name(a) + "> = " + to_string(form[b][a]));
	for (int a = 0; a < n; ++a)
		for (int b = 0; b < n; ++b)
			for (int c = 0; c < n; ++c) {
				Rational lhs = form_g(spec, bracket_g(spec, basis(a), basis(b)), basis(c));
				Rational rhs = form_g(spec, basis(a), bracket_g(spec, basis(b), basis(c)));
				if (lhs != rhs)
					return fail("invariance", {a, b, c},
					            "<[" + spec.name(a) + "," + spec.name(b) + "]," + spec.name(c) + "> = " +
					                to_string(lhs) + " but <" + spec.name(a) + ",[" + spec.name(b) + "," +
					                spec.name(c) + "]> = " + to_string(rhs));
			}
	return {};
}

}  // namespace tva
