#include "tva/vertex_ops.hpp"

#include "tva/state_io.hpp"

#include <algorithm>

namespace tva {

namespace {

PBWMonomial drop_first(const PBWMonomial& w)
{
	return PBWMonomial{std::vector<LoopMode>(w.word.begin() + 1, w.word.end()), w.tail};
}

nlohmann::json mismatch(const LieAlgebraSpec& spec, const StateVector& lhs, const StateVector& rhs)
{
	return {{"lhs", format_state(lhs, spec)}, {"rhs", format_state(rhs, spec)}};
}

StateVector current_state(int a, const MultiIndex& m, int k = 1)
{
	return StateVector::basis(PBWMonomial{{LoopMode{a, -k, m}}, PBWMonomial::kVacuum});
}

}  // namespace

VertexAlgebra::VertexAlgebra(const VacuumModule& V, std::size_t cache_entries) : V_(V), cache_(cache_entries) {}

StateVector VertexAlgebra::y_mode(const StateVector& v, int n0, const MultiIndex& n, const StateVector& w,
                                  const RestrictedModule& W) const
{
	StateVector out;
	for (const auto& [vid, cv] : v.terms())
		for (const auto& [wid, cw] : w.terms()) {
			auto part = y_monomial(vid, n0, n, wid, W);
			if (!part->is_zero())
				out.add_scaled(*part, cv * cw);
		}
	return out;
}

std::shared_ptr<const StateVector> VertexAlgebra::y_monomial(MonoId v, int n0, const MultiIndex& n, MonoId w,
                                                             const RestrictedModule& W) const
{
	Key key{v, w, n0, n, W.uid()};
	if (auto hit = cache_.find(key))
		return hit;
	auto value = std::make_shared<const StateVector>(compute(v, n0, n, w, W));
	cache_.insert(key, value);
	return value;
}

StateVector VertexAlgebra::compute(MonoId vid, int n0, const MultiIndex& n, MonoId wid,
                                   const RestrictedModule& W) const
{
	auto& table = MonomialTable::instance();
	const PBWMonomial& v = table.get(vid);
	const int dv = table.degree(vid);
	const int dw = table.degree(wid);
	if (n0 >= dv + dw)
		return {};
	if (v.word.empty()) {
		if (v.tail == PBWMonomial::kVacuum) {
			if (n0 == -1 && n.is_zero())
				return StateVector::basis(wid);
			return {};
		}
		return *W.act_monomial(LoopMode{v.tail, n0, n}, wid);
	}

	// v = a(m0, m) v' with m0 < 0:
	// (a_{m0,m} v')_{n0,n} = sum_i (-1)^i C(m0,i) [ a(m0-i,m) v'_{n0+i,n-m}
	//                                             - (-1)^{m0} v'_{m0+n0-i,n-m} a(i,m) ]
	const LoopMode& x = v.word.front();
	const int m0 = x.t0;
	const MonoId rest = intern(drop_first(v));
	const int drest = dv + m0;
	const MultiIndex nm = n - x.m;
	StateVector out;
	Rational c;
	for (int i = 0; n0 + i < drest + dw; ++i) {
		auto inner = y_monomial(rest, n0 + i, nm, wid, W);
		if (inner->is_zero())
			continue;
		c = binomial(m0, i);
		if (i % 2)
			c = -c;
		out.add_scaled(W.act(LoopMode{x.basis, m0 - i, x.m}, *inner), c);
	}
	const StateVector rest_state = StateVector::basis(rest);
	for (int i = 0; i <= dw; ++i) {
		auto aw = W.act_monomial(LoopMode{x.basis, i, x.m}, wid);
		if (aw->is_zero())
			continue;
		c = binomial(m0, i);
		if ((i + m0) % 2 == 0)
			c = -c;
		out.add_scaled(y_mode(rest_state, m0 + n0 - i, nm, *aw, W), c);
	}
	return out;
}

CheckOutcome VertexAlgebra::creation_check(const StateVector& v, const ModeWindow& win) const
{
	CheckOutcome res;
	const StateVector one = StateVector::vacuum();
	for (const auto& [n0, n] : win.cells()) {
		if (n0 < 0)
			continue;
		++res.coefficients;
		StateVector r = y_mode(v, n0, n, one);
		if (!r.is_zero()) {
			res.ok = false;
			res.witness = {{"n0", n0}, {"n", n.to_string()}, {"value", format_state(r, spec())}};
			return res;
		}
	}
	return res;
}

std::optional<MultiIndex> VertexAlgebra::x_support(const StateVector& u) const
{
	std::optional<MultiIndex> lambda;
	for (const auto& [id, c] : u.terms()) {
		const PBWMonomial& m = monomial(id);
		if (m.tail != PBWMonomial::kVacuum)
			return std::nullopt;
		MultiIndex t = m.t_degree(rank());
		if (lambda && *lambda != t)
			return std::nullopt;
		lambda = t;
	}
	if (!lambda)
		lambda = MultiIndex(rank());
	return lambda;
}

StateVector VertexAlgebra::y0_mode(const StateVector& u, int n0, const StateVector& w, const RestrictedModule& W) const
{
	StateVector out;
	for (const auto& [id, c] : u.terms()) {
		const PBWMonomial& m = monomial(id);
		if (m.tail != PBWMonomial::kVacuum)
			throw FinitenessError("Y(u; x0, x) has infinite x-support: " + format_monomial(m, spec()) +
			                      " has a tail in g, so u is not in V^0");
		MultiIndex lambda = m.t_degree(rank());
		for (const auto& [wid, cw] : w.terms()) {
			auto part = y_monomial(id, n0, lambda, wid, W);
			if (!part->is_zero())
				out.add_scaled(*part, c * cw);
		}
	}
	return out;
}

CheckOutcome VertexAlgebra::precover_roundtrip(const StateVector& u, const ModeWindow& win,
                                               const RestrictedModule& W) const
{
	CheckOutcome res;
	auto lambda = x_support(u);
	if (!lambda) {
		res.ok = false;
		res.witness = {{"reason", "state is not t-homogeneous with vacuum tail"}};
		return res;
	}
	auto cells = win.cells();
	for (int n0 = win.m0_lo; n0 <= win.m0_hi; ++n0)
		if (std::find(cells.begin(), cells.end(), std::make_pair(n0, *lambda)) == cells.end())
			cells.push_back({n0, *lambda});
	for (const auto& [n0, n] : cells)
		for (std::size_t s = 0; s < win.states.size(); ++s) {
			const auto& w = win.states[s];
			++res.coefficients;
			StateVector lhs = y_mode(u, n0, n, w, W);
			StateVector rhs = n == *lambda ? y0_mode(u, n0, w, W) : StateVector{};
			if (lhs != rhs) {
				res.ok = false;
				res.witness = mismatch(spec(), lhs, rhs);
				res.witness["n0"] = n0;
				res.witness["n"] = n.to_string();
				res.witness["lambda"] = lambda->to_string();
				res.witness["state"] = win.state_labels.at(s);
				return res;
			}
		}
	return res;
}

CheckOutcome VertexAlgebra::reconstruction(const StateVector& u, const ModeWindow& win,
                                           const RestrictedModule& W) const
{
	CheckOutcome res;
	const StateVector one = StateVector::vacuum();
	for (const auto& [n0, n] : win.cells()) {
		StateVector slice = y_mode(u, -1, n, one);
		for (std::size_t s = 0; s < win.states.size(); ++s) {
			const auto& w = win.states[s];
			++res.coefficients;
			StateVector lhs = y_mode(u, n0, n, w, W);
			StateVector rhs = y0_mode(slice, n0, w, W);
			if (lhs != rhs) {
				res.ok = false;
				res.witness = mismatch(spec(), lhs, rhs);
				res.witness["n0"] = n0;
				res.witness["n"] = n.to_string();
				res.witness["state"] = win.state_labels.at(s);
				return res;
			}
		}
	}
	return res;
}

CheckOutcome VertexAlgebra::d0_check(const StateVector& u) const
{
	CheckOutcome res;
	res.coefficients = 1;
	StateVector lhs = V_.d0(u);
	StateVector rhs = y0_mode(u, -2, StateVector::vacuum());
	if (lhs != rhs) {
		res.ok = false;
		res.witness = mismatch(spec(), lhs, rhs);
	}
	return res;
}

CheckOutcome VertexAlgebra::v0_creation(const StateVector& u, const ModeWindow& win) const
{
	CheckOutcome res;
	const StateVector one = StateVector::vacuum();
	for (int n0 = std::max(0, win.m0_lo); n0 <= win.m0_hi; ++n0) {
		++res.coefficients;
		StateVector r = y0_mode(u, n0, one);
		if (!r.is_zero()) {
			res.ok = false;
			res.witness = {{"n0", n0}, {"value", format_state(r, spec())}};
			return res;
		}
	}
	++res.coefficients;
	StateVector c = y0_mode(u, -1, one);
	if (c != u) {
		res.ok = false;
		res.witness = mismatch(spec(), c, u);
		res.witness["n0"] = -1;
	}
	return res;
}

CheckOutcome VertexAlgebra::v0_affine_commutator(int a, int b, const ModeWindow& win, const RestrictedModule& W) const
{
	CheckOutcome res;
	auto cells = win.cells();
	for (const auto& [p0, m] : cells) {
		StateVector ua = current_state(a, m);
		for (const auto& [q0, n] : cells) {
			StateVector vb = current_state(b, n);
			MultiIndex mn = m + n;
			for (std::size_t s = 0; s < win.states.size(); ++s) {
				const auto& w = win.states[s];
				++res.coefficients;
				StateVector lhs = y0_mode(ua, p0, y0_mode(vb, q0, w, W), W);
				lhs -= y0_mode(vb, q0, y0_mode(ua, p0, w, W), W);
				StateVector rhs;
				for (const auto& t : spec().bracket(a, b))
					rhs.add_scaled(y0_mode(current_state(t.index, mn), p0 + q0, w, W), t.coeff);
				if (p0 + q0 == 0 && mn.is_zero())
					rhs.add_scaled(w, p0 * spec().form(a, b) * W.level());
				if (lhs != rhs) {
					res.ok = false;
					res.witness = mismatch(spec(), lhs, rhs);
					res.witness["a"] = spec().name(a);
					res.witness["b"] = spec().name(b);
					res.witness["p"] = {p0, m.to_string()};
					res.witness["q"] = {q0, n.to_string()};
					res.witness["state"] = win.state_labels.at(s);
					return res;
				}
			}
		}
	}
	return res;
}

CheckOutcome VertexAlgebra::v0_borcherds(const StateVector& u, const StateVector& v, const StateVector& w, int L,
                                         int M, int N, const RestrictedModule& W) const
{
	CheckOutcome res;
	res.coefficients = 1;
	const int du = std::max(0, u.max_degree());
	const int dv = std::max(0, v.max_degree());
	const int dw = std::max(0, w.max_degree());
	StateVector lhs;
	for (int i = 0; L + i < du + dv; ++i) {
		mpz_class c = binomial(M, i);
		if (c == 0)
			break;
		lhs.add_scaled(y0_mode(y0_mode(u, L + i, v), M + N - i, w, W), Rational(c));
	}
	StateVector rhs;
	for (int i = 0;; ++i) {
		const bool first = N + i < dv + dw;
		const bool second = M + i < du + dw;
		if (!first && !second)
			break;
		Rational c = binomial(L, i);
		if (c == 0)
			break;
		if (i % 2)
			c = -c;
		if (first)
			rhs.add_scaled(y0_mode(u, M + L - i, y0_mode(v, N + i, w, W), W), c);
		if (second)
			rhs.add_scaled(y0_mode(v, L + N - i, y0_mode(u, M + i, w, W), W), L % 2 == 0 ? Rational(-c) : c);
	}
	if (lhs != rhs) {
		res.ok = false;
		res.witness = mismatch(spec(), lhs, rhs);
		res.witness["LMN"] = {L, M, N};
	}
	return res;
}

bool EchelonBasis::insert(const StateVector& v)
{
	StateVector r = reduce(v);
	if (r.is_zero())
		return false;
	auto sorted = r.sorted_terms();
	const PBWMonomial* lead = sorted.back().first;
	MonoId pivot = intern(*lead);
	Rational inv = 1 / r.coeff(pivot);
	r *= inv;
	for (std::size_t i = 0; i < rows_.size(); ++i) {
		Rational c = rows_[i].coeff(pivot);
		if (c != 0)
			rows_[i].add_scaled(r, -c);
	}
	pivot_row_[pivot] = rows_.size();
	pivots_.push_back(pivot);
	rows_.push_back(std::move(r));
	return true;
}

StateVector EchelonBasis::reduce(StateVector v) const
{
	std::vector<std::pair<std::size_t, Rational>> hits;
	for (const auto& [id, c] : v.terms()) {
		auto it = pivot_row_.find(id);
		if (it != pivot_row_.end())
			hits.push_back({it->second, c});
	}
	for (const auto& [row, c] : hits)
		v.add_scaled(rows_[row], -c);
	return v;
}

std::vector<std::size_t> pbw_count(std::size_t colors, int max_degree)
{
	std::vector<std::size_t> p(max_degree + 1, 0);
	p[0] = 1;
	for (int k = 1; k <= max_degree; ++k) {
		// multiply by (1 - q^k)^{-colors} = sum_j C(colors + j - 1, j) q^{kj}
		std::vector<std::size_t> next(max_degree + 1, 0);
		for (int d = 0; d <= max_degree; ++d) {
			if (p[d] == 0)
				continue;
			for (int j = 0; d + k * j <= max_degree; ++j) {
				mpz_class c = binomial(static_cast<long>(colors) + j - 1, j);
				next[d + k * j] += p[d] * c.get_ui();
			}
		}
		p = std::move(next);
	}
	return p;
}

std::vector<PBWMonomial> enumerate_monomials(const LieAlgebraSpec& spec, const std::vector<MultiIndex>& box,
                                             int max_degree, bool tail_in_g)
{
	std::vector<LoopMode> modes;
	for (int k = 1; k <= max_degree; ++k)
		for (int a = 0; a < spec.dim(); ++a)
			for (const auto& m : box)
				modes.push_back(LoopMode{a, -k, m});
	std::sort(modes.begin(), modes.end());
	const int budget = tail_in_g ? max_degree - 1 : max_degree;
	std::vector<PBWMonomial> out;
	std::vector<LoopMode> word;
	auto emit = [&]() {
		if (tail_in_g) {
			for (int b = 0; b < spec.dim(); ++b)
				out.push_back(PBWMonomial{word, b});
		} else {
			out.push_back(PBWMonomial{word, PBWMonomial::kVacuum});
		}
	};
	auto rec = [&](auto&& self, std::size_t from, int left) -> void {
		emit();
		for (std::size_t i = from; i < modes.size(); ++i) {
			if (-modes[i].t0 > left)
				continue;
			word.push_back(modes[i]);
			self(self, i, left + modes[i].t0);
			word.pop_back();
		}
	};
	if (budget >= 0)
		rec(rec, 0, budget);
	return out;
}

V0Subspace build_V0(const VertexAlgebra& va, const V0Options& opt)
{
	V0Subspace out;
	const auto& spec = va.spec();
	const StateVector one = StateVector::vacuum();

	auto add = [&](const StateVector& s, const std::string& prov) {
		if (s.is_zero())
			return false;
		for (const auto& [id, c] : s.terms())
			if (monomial(id).tail != PBWMonomial::kVacuum)
				out.tails_absent = false;
		int deg = s.max_degree();
		if (deg > opt.max_degree)
			return false;
		if (!out.basis[deg].insert(s))
			return false;
		out.spanning.push_back(s);
		out.provenance.push_back(prov);
		return true;
	};

	StateVector vac = va.y_mode(one, -1, MultiIndex(va.rank()), one);
	add(vac, "1_(-1,0) 1");
	out.contains_vacuum = vac == one;

	std::vector<std::pair<StateVector, std::string>> frontier{{one, "1"}};
	for (int d = 1; d <= opt.depth; ++d) {
		std::vector<std::pair<StateVector, std::string>> next;
		for (const auto& [v, prov] : frontier) {
			const int dv = std::max(0, v.max_degree());
			for (int a = 0; a < spec.dim(); ++a)
				for (int m0 = -1; m0 >= opt.min_m0; --m0) {
					if (dv - m0 > opt.max_degree)
						break;
					for (const auto& m : opt.box) {
						StateVector s = va.product(StateVector::tail(a), m0, m, v);
						std::string p = spec.name(a) + "_(" + std::to_string(m0) + "," + m.to_string() + ") " + prov;
						if (add(s, p))
							next.push_back({std::move(s), std::move(p)});
					}
				}
		}
		frontier = std::move(next);
	}

	if (opt.tail_probe_degree >= 1) {
		for (const auto& mono : enumerate_monomials(spec, opt.box, opt.tail_probe_degree, true)) {
			StateVector v = StateVector::basis(mono);
			const int dv = mono.degree();
			for (int m0 = -1; m0 >= opt.min_m0; --m0) {
				if (dv - m0 - 1 > opt.max_degree)
					break;
				for (const auto& m : opt.box) {
					StateVector s = va.product(v, m0, m, one);
					add(s, "(" + format_monomial(mono, spec) + ")_(" + std::to_string(m0) + "," + m.to_string() +
					           ") 1");
				}
			}
		}
	}

	auto in_box = [&](const PBWMonomial& m) {
		for (const auto& x : m.word)
			if (std::find(opt.box.begin(), opt.box.end(), x.m) == opt.box.end())
				return false;
		return true;
	};
	auto expected = pbw_count(static_cast<std::size_t>(spec.dim()) * opt.box.size(), opt.max_degree);
	for (int d = 0; d <= opt.max_degree; ++d) {
		out.graded_dims[d] = out.basis.count(d) ? out.basis[d].rank() : 0;
		EchelonBasis proj;
		if (out.basis.count(d))
			for (const auto& row : out.basis[d].rows()) {
				StateVector p;
				for (const auto& [id, c] : row.terms())
					if (in_box(monomial(id)))
						p.add(id, c);
				proj.insert(p);
			}
		out.box_dims[d] = proj.rank();
		out.expected_box_dims[d] = expected[d];
	}
	return out;
}

}  // namespace tva
