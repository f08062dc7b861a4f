#include "tva/toroidal.hpp"

#include <sstream>
#include <stdexcept>

namespace tva {

ToroidalElement ToroidalElement::loop(int rank, int basis, int t0, const MultiIndex& m, Rational coeff)
{
	if (m.rank() != rank)
		throw std::invalid_argument("loop mode rank mismatch");
	ToroidalElement x(rank);
	x.add_loop(LoopMode{basis, t0, m}, coeff);
	return x;
}

ToroidalElement ToroidalElement::central(int rank, Rational coeff)
{
	ToroidalElement x(rank);
	x.central_ = std::move(coeff);
	return x;
}

ToroidalElement ToroidalElement::derivation(int rank, int i, Rational coeff)
{
	if (i < 0 || i > rank)
		throw std::invalid_argument("derivation index out of range");
	ToroidalElement x(rank);
	x.der_[i] = std::move(coeff);
	return x;
}

void ToroidalElement::add_loop(const LoopMode& x, const Rational& c)
{
	if (c == 0)
		return;
	if (x.m.rank() != rank_)
		throw std::invalid_argument("loop mode rank mismatch");
	auto [it, inserted] = loops_.try_emplace(x, c);
	if (!inserted) {
		it->second += c;
		if (it->second == 0)
			loops_.erase(it);
	}
}

ToroidalElement& ToroidalElement::operator+=(const ToroidalElement& o)
{
	if (o.rank_ != rank_)
		throw std::invalid_argument("toroidal element rank mismatch");
	for (const auto& [x, c] : o.loops_)
		add_loop(x, c);
	central_ += o.central_;
	for (int i = 0; i <= rank_; ++i)
		der_[i] += o.der_[i];
	return *this;
}

ToroidalElement& ToroidalElement::operator*=(const Rational& c)
{
	if (c == 0) {
		loops_.clear();
		central_ = 0;
		for (auto& d : der_)
			d = 0;
		return *this;
	}
	for (auto& [x, v] : loops_)
		v *= c;
	central_ *= c;
	for (auto& d : der_)
		d *= c;
	return *this;
}

bool ToroidalElement::is_zero() const
{
	if (!loops_.empty() || central_ != 0)
		return false;
	for (const auto& d : der_)
		if (d != 0)
			return false;
	return true;
}

std::string mode_to_string(const LieAlgebraSpec& spec, const LoopMode& x)
{
	return spec.name(x.basis) + "(" + std::to_string(x.t0) + "," + x.m.to_string() + ")";
}

std::string ToroidalElement::to_string(const LieAlgebraSpec& spec) const
{
	std::ostringstream os;
	bool first = true;
	auto term = [&](const Rational& c, const std::string& what) {
		os << (first ? "" : " + ") << tva::to_string(c) << "*" << what;
		first = false;
	};
	for (const auto& [x, c] : loops_)
		term(c, mode_to_string(spec, x));
	if (central_ != 0)
		term(central_, "k");
	for (int i = 0; i <= rank_; ++i)
		if (der_[i] != 0)
			term(der_[i], "d" + std::to_string(i));
	return first ? "0" : os.str();
}

LoopBracket bracket_modes(const LieAlgebraSpec& spec, const LoopMode& x, const LoopMode& y)
{
	LoopBracket out;
	MultiIndex m = x.m + y.m;
	for (const auto& t : spec.bracket(x.basis, y.basis))
		out.loop.push_back({LoopMode{t.index, x.t0 + y.t0, m}, t.coeff});
	if (x.t0 + y.t0 == 0 && m.is_zero() && x.t0 != 0)
		out.central = x.t0 * spec.form(x.basis, y.basis);
	return out;
}

namespace {

/// [d_i, X] for the loop part of X.
ToroidalElement derivation_on_loops(int i, const ToroidalElement& x)
{
	ToroidalElement out(x.rank());
	for (const auto& [mode, c] : x.loops()) {
		if (i == 0) {
			if (mode.t0 != 0)
				out.add_loop(LoopMode{mode.basis, mode.t0 - 1, mode.m}, -mode.t0 * c);
		} else if (mode.m[i - 1] != 0) {
			out.add_loop(mode, -mode.m[i - 1] * c);
		}
	}
	return out;
}

}  // namespace

ToroidalElement toroidal_bracket(const LieAlgebraSpec& spec, const ToroidalElement& x, const ToroidalElement& y)
{
	if (x.rank() != y.rank())
		throw std::invalid_argument("toroidal_bracket: rank mismatch");
	ToroidalElement out(x.rank());
	for (const auto& [a, ca] : x.loops())
		for (const auto& [b, cb] : y.loops()) {
			LoopBracket br = bracket_modes(spec, a, b);
			Rational c = ca * cb;
			for (const auto& [mode, v] : br.loop)
				out.add_loop(mode, c * v);
			out.add_central(c * br.central);
		}
	for (int i = 0; i <= x.rank(); ++i) {
		if (x.der()[i] != 0) {
			ToroidalElement t = derivation_on_loops(i, y);
			t *= x.der()[i];
			out += t;
		}
		if (y.der()[i] != 0) {
			ToroidalElement t = derivation_on_loops(i, x);
			t *= -y.der()[i];
			out += t;
		}
	}
	return out;
}

}  // namespace tva
