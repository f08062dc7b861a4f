#include "tva/vacuum_module.hpp"

#include <atomic>
#include <stdexcept>

namespace tva {

namespace {

std::atomic<uint64_t> next_uid{1};

PBWMonomial drop_first(const PBWMonomial& w)
{
	return PBWMonomial{std::vector<LoopMode>(w.word.begin() + 1, w.word.end()), w.tail};
}

}  // namespace

RestrictedModule::RestrictedModule() : uid_(next_uid.fetch_add(1)) {}

StateVector RestrictedModule::act(const LoopMode& x, const StateVector& w) const
{
	if (w.size() == 1 && w.terms().begin()->second == 1)
		return *act_monomial(x, w.terms().begin()->first);
	StateVector out;
	for (const auto& [id, c] : w.terms())
		out.add_scaled(*act_monomial(x, id), c);
	return out;
}

StateVector RestrictedModule::act(const ToroidalElement& x, const StateVector& w) const
{
	for (const auto& d : x.der())
		if (d != 0)
			throw std::invalid_argument("derivations are not represented on this module");
	StateVector out;
	for (const auto& [mode, c] : x.loops())
		out.add_scaled(act(mode, w), c);
	out.add_scaled(w, x.central_coeff() * level());
	return out;
}

VacuumModule::VacuumModule(LieAlgebraSpec spec, int rank, Rational level, std::size_t cache_entries)
    : spec_(std::move(spec)), rank_(rank), level_(std::move(level)), cache_(cache_entries)
{
	if (rank_ < 1 || rank_ > kMaxRank)
		throw std::invalid_argument("r must lie in [1, " + std::to_string(kMaxRank) + "]");
}

void VacuumModule::set_central_shift(Rational shift)
{
	central_shift_ = std::move(shift);
	cache_.clear();
}

StateVector VacuumModule::base_action(int a, int k, const MultiIndex&, int tail) const
{
	if (k < 0)
		throw std::invalid_argument("base_action needs k >= 0");
	StateVector out;
	if (tail == PBWMonomial::kVacuum || k >= 2)
		return out;
	if (k == 0) {
		for (const auto& t : spec_.bracket(a, tail))
			out.add(intern(PBWMonomial{{}, t.index}), t.coeff);
	} else {
		out.add(MonomialTable::instance().vacuum(), level_ * spec_.form(a, tail));
	}
	return out;
}

std::shared_ptr<const StateVector> VacuumModule::act_monomial(const LoopMode& x, MonoId w) const
{
	Key key{x, w};
	if (auto hit = cache_.find(key))
		return hit;
	auto value = std::make_shared<const StateVector>(compute(x, w));
	cache_.insert(key, value);
	return value;
}

StateVector VacuumModule::compute(const LoopMode& x, MonoId wid) const
{
	const PBWMonomial& w = monomial(wid);
	if (x.m.rank() != rank_)
		throw std::invalid_argument("mode rank differs from module rank");
	if (x.t0 < 0) {
		if (w.word.empty() || !(w.word.front() < x)) {
			PBWMonomial out;
			out.word.reserve(w.word.size() + 1);
			out.word.push_back(x);
			out.word.insert(out.word.end(), w.word.begin(), w.word.end());
			out.tail = w.tail;
			return StateVector::basis(intern(std::move(out)));
		}
		const LoopMode x1 = w.word.front();
		StateVector rest = StateVector::basis(intern(drop_first(w)));
		StateVector out = act(x1, act(x, rest));
		for (const auto& [mode, c] : bracket_modes(spec_, x, x1).loop)
			out.add_scaled(act(mode, rest), c);
		return out;
	}
	if (w.word.empty())
		return base_action(x.basis, x.t0, x.m, w.tail);
	const LoopMode x1 = w.word.front();
	StateVector rest = StateVector::basis(intern(drop_first(w)));
	StateVector out = act(x1, act(x, rest));
	LoopBracket br = bracket_modes(spec_, x, x1);
	for (const auto& [mode, c] : br.loop)
		out.add_scaled(act(mode, rest), c);
	if (br.central != 0)
		out.add_scaled(rest, br.central * (level_ + central_shift_));
	return out;
}

StateVector VacuumModule::d0(const StateVector& state) const
{
	StateVector out;
	for (const auto& [id, c] : state.terms()) {
		const PBWMonomial& w = monomial(id);
		if (w.tail != PBWMonomial::kVacuum)
			throw std::invalid_argument("d0 is only defined here on states with vacuum tail");
		// d0 (X1 ... Xs 1) = sum_i X1 ... [d0, Xi] ... Xs 1, built right to left.
		StateVector plain = StateVector::vacuum();
		StateVector derived;
		for (auto it = w.word.rbegin(); it != w.word.rend(); ++it) {
			LoopMode shifted{it->basis, it->t0 - 1, it->m};
			StateVector next_derived = act(*it, derived);
			next_derived.add_scaled(act(shifted, plain), Rational(-it->t0));
			derived = std::move(next_derived);
			plain = act(*it, plain);
		}
		out.add_scaled(derived, c);
	}
	return out;
}

bool is_form_automorphism(const LieAlgebraSpec& spec, const std::vector<std::vector<Rational>>& sigma)
{
	const int n = spec.dim();
	if (static_cast<int>(sigma.size()) != n)
		return false;
	for (const auto& row : sigma)
		if (static_cast<int>(row.size()) != n)
			return false;
	auto image = [&](int j) {
		GVector v(n);
		for (int i = 0; i < n; ++i)
			v[i] = sigma[i][j];
		return v;
	};
	auto apply = [&](const GVector& x) {
		GVector v(n);
		for (int i = 0; i < n; ++i)
			for (int j = 0; j < n; ++j)
				v[i] += sigma[i][j] * x[j];
		return v;
	};
	for (int a = 0; a < n; ++a)
		for (int b = 0; b < n; ++b) {
			if (apply(bracket_g(spec, spec.basis_vector(a), spec.basis_vector(b))) !=
			    bracket_g(spec, image(a), image(b)))
				return false;
			if (form_g(spec, image(a), image(b)) != spec.form(a, b))
				return false;
		}
	return true;
}

TwistedModule::TwistedModule(const VacuumModule& base, std::vector<std::vector<Rational>> sigma, std::vector<int> eps)
    : base_(base), sigma_(std::move(sigma)), eps_(std::move(eps))
{
	if (!is_form_automorphism(base.spec(), sigma_))
		throw SpecError("twist is not a form-preserving automorphism of g");
	if (static_cast<int>(eps_.size()) != base.rank())
		throw SpecError("twist signs must have one entry per toroidal direction");
	for (int e : eps_)
		if (e != 1 && e != -1)
			throw SpecError("twist signs must be +1 or -1");
}

std::string TwistedModule::name() const
{
	std::string s = "twisted " + base_.name() + " eps=(";
	for (std::size_t i = 0; i < eps_.size(); ++i)
		s += (i ? "," : "") + std::to_string(eps_[i]);
	return s + ")";
}

std::shared_ptr<const StateVector> TwistedModule::act_monomial(const LoopMode& x, MonoId w) const
{
	int sign = 1;
	for (int i = 0; i < rank(); ++i)
		if (eps_[i] < 0 && (x.m[i] % 2 != 0))
			sign = -sign;
	StateVector out;
	const int n = spec().dim();
	for (int i = 0; i < n; ++i) {
		const Rational& s = sigma_[i][x.basis];
		if (s == 0)
			continue;
		out.add_scaled(*base_.act_monomial(LoopMode{i, x.t0, x.m}, w), sign * s);
	}
	return std::make_shared<const StateVector>(std::move(out));
}

std::vector<std::vector<Rational>> TwistedModule::default_sigma(const LieAlgebraSpec& spec)
{
	const int n = spec.dim();
	std::vector<std::vector<Rational>> cand(n, std::vector<Rational>(n));
	if (n >= 2) {
		cand[1][0] = 1;
		cand[0][1] = 1;
		for (int i = 2; i < n; ++i)
			cand[i][i] = -1;
		if (is_form_automorphism(spec, cand))
			return cand;
	}
	for (int i = 0; i < n; ++i)
		for (int j = 0; j < n; ++j)
			cand[i][j] = i == j ? -1 : 0;
	if (is_form_automorphism(spec, cand))
		return cand;
	for (int i = 0; i < n; ++i)
		cand[i][i] = 1;
	return cand;
}

}  // namespace tva
