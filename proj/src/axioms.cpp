#include "tva/axioms.hpp"

#include "tva/state_io.hpp"

#include <atomic>
#include <chrono>
#include <map>
#include <thread>

namespace tva {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0)
{
	return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

Finding start(const std::string& id, const std::string& subject, const ModeWindow* win)
{
	Finding f;
	f.identity = id;
	f.paper_ref = identity_reference(id);
	f.subject = subject;
	if (win)
		f.window = win->to_json();
	return f;
}

void fail(Finding& f, nlohmann::json witness)
{
	f.status = "fail";
	f.witness = std::move(witness);
}

int deg0(const StateVector& s) { return std::max(0, s.max_degree()); }

std::string label(const StateVector& s, const LieAlgebraSpec& spec) { return format_state(s, spec); }

nlohmann::json sides(const LieAlgebraSpec& spec, const StateVector& lhs, const StateVector& rhs)
{
	return {{"lhs", format_state(lhs, spec)}, {"rhs", format_state(rhs, spec)}};
}

Rational signed_binomial(long n, long i, bool negate)
{
	Rational c(binomial(n, i));
	if (negate)
		c = -c;
	return c;
}

ModeWindow single_state(const ModeWindow& win, const StateVector& w, const std::string& lab)
{
	ModeWindow out = win;
	out.states = {w};
	out.state_labels = {lab};
	return out;
}

/// Coefficient tuple of weak commutativity; returns the nonzero sum or zero.
StateVector weak_comm_coeff(const AxiomContext& ctx, const StateVector& u, const StateVector& v, int k, int p0,
                            const MultiIndex& p, int q0, const MultiIndex& q, const StateVector& w)
{
	const auto& va = ctx.va;
	StateVector sum;
	for (int i = 0; i <= k; ++i) {
		Rational c = signed_binomial(k, i, i % 2);
		sum.add_scaled(va.y_mode(u, p0 + k - i, p, va.y_mode(v, q0 + i, q, w, ctx.W), ctx.W), c);
		sum.add_scaled(va.y_mode(v, q0 + i, q, va.y_mode(u, p0 + k - i, p, w, ctx.W), ctx.W), -c);
	}
	return sum;
}

struct AssocSides {
	StateVector lhs, rhs;
};

AssocSides weak_assoc_coeff(const AxiomContext& ctx, const StateVector& u, const StateVector& v,
                            const StateVector& w, int l, int m0, const MultiIndex& m, int k0, const MultiIndex& k)
{
	const auto& va = ctx.va;
	AssocSides s;
	for (int j = 0; j <= l; ++j) {
		StateVector uv = va.product(u, m0 + l - j, m, v);
		if (uv.is_zero())
			continue;
		s.lhs.add_scaled(va.y_mode(uv, k0 + j, k, w, ctx.W), Rational(binomial(l, j)));
	}
	const int dv = deg0(v), dw = deg0(w);
	const MultiIndex km = k - m;
	for (int j = 0; k0 + j < dv + dw; ++j) {
		Rational c(binomial(j - m0 - 1, j));
		if (c == 0)
			continue;
		StateVector vw = va.y_mode(v, k0 + j, km, w, ctx.W);
		if (vw.is_zero())
			continue;
		s.rhs.add_scaled(va.y_mode(u, m0 + l - j, m, vw, ctx.W), c);
	}
	return s;
}

/// sum_j (-1)^{m0+j+1} C(j-k0-1, j) (v_{m0+j, k-m} u)_{k0-j, k} w
StateVector skew_rhs(const AxiomContext& ctx, const StateVector& u, const StateVector& v, int m0, const MultiIndex& m,
                     int k0, const MultiIndex& k, const StateVector& w)
{
	const auto& va = ctx.va;
	StateVector out;
	const int du = deg0(u), dv = deg0(v);
	const MultiIndex km = k - m;
	for (int j = 0; m0 + j < du + dv; ++j) {
		Rational c(binomial(j - k0 - 1, j));
		if (c == 0)
			continue;
		if ((m0 + j + 1) % 2 != 0)
			c = -c;
		StateVector vu = va.product(v, m0 + j, km, u);
		if (vu.is_zero())
			continue;
		out.add_scaled(va.y_mode(vu, k0 - j, k, w, ctx.W), c);
	}
	return out;
}

/// Theoretical bound for the orders: Y(u)_n v = 0 for n >= deg u + deg v.
int order_bound(const StateVector& a, const StateVector& b) { return deg0(a) + deg0(b); }

}  // namespace

std::string identity_reference(const std::string& id)
{
	static const std::map<std::string, std::string> refs = {
	    {"lie.validate", "antisymmetry, Jacobi identity, symmetry and invariance of the form on basis triples"},
	    {"lie.toroidal-jacobi", "Jacobi identity of the toroidal bracket with central term and derivations"},
	    {"module.base-table", "u_(m0,m) b for generators: [a,b] at m0=0, level*<a,b>*1 at m0=1, zero for m0>=2"},
	    {"module.law", "x(y w) - y(x w) = [x,y] w on the induced module, central element acting by the level"},
	    {"module.restricted", "a(n0,n) w = 0 for n0 > deg w, and a(n0,n) lowers the degree by n0"},
	    {"field.locality-table", "(x0-y0)^k [a(x0,x), b(y0,y)] = 0 with k = 2, 1, 0 by the bracket structure"},
	    {"field.transfer", "bracket expansion coefficients c_j equal the products a_(j,m) b"},
	    {"weak-commutativity", "(x0-y0)^k Y(u;x0,x)Y(v;y0,y) = (x0-y0)^k Y(v;y0,y)Y(u;x0,x)"},
	    {"weak-associativity", "(z0+y0)^l Y(Y(u;z0,z)v;y0,y)w = (z0+y0)^l Y(u;z0+y0,zy)Y(v;y0,y)w"},
	    {"jacobi", "Jacobi identity via weak commutativity plus weak associativity"},
	    {"skew-symmetry", "Y(Y(u;z0,z)v;y0,y) = e^{z0 d/dy0} z^{y d/dy} Y(Y(v;-z0,1/z)u;y0,y), and its square"},
	    {"vacuum-lemma", "Y(u_(k,m)1)=0 for k>=0; Y(u_(-k-1,m)1) = (1/k!) d^k/dx0^k Y(u;x0,m) x^-m; Y(u) = sum_m "
	                     "Y(u_(-1,m)1)"},
	    {"commutator-formula", "[u_(p0,m), v_(q0,q)] = sum_i C(p0,i) (u_(i,m)v)_(p0+q0-i, q+m)"},
	    {"borcherds", "coefficients of the Jacobi identity at sampled index tuples"},
	    {"creation", "Y(v;x0,x)1 has no negative powers of x0"},
	    {"v0.dimensions", "graded dimensions of the vacuum ideal against the PBW count of the r-loop affine algebra"},
	    {"v0.tails", "the vacuum ideal contains no g tails"},
	    {"v0.affine", "Y^0 currents satisfy the r-loop affine bracket"},
	    {"v0.creation", "Y^0(u,x0)1 = u + O(x0)"},
	    {"v0.reconstruction", "Y(u;x0,x) = sum_m Y^0(u_(-1,m)1, x0) x^-m"},
	    {"v0.d0", "d0 on the vacuum ideal equals u -> u_(-2) 1 of Y^0"},
	    {"v0.precover", "Y(u;x0,x) is supported on the single x-degree of u and restricts to Y^0"},
	    {"v0.borcherds", "Borcherds identity of the ordinary vertex algebra Y^0"},
	    {"v0.injectivity", "nonzero states with identically zero vertex operator on the window (informational)"},
	    {"mutation", "single corruption of the input must make some identity fail"},
	};
	auto it = refs.find(id);
	return it == refs.end() ? id : it->second;
}

Finding check_weak_commutativity(const AxiomContext& ctx, const StateVector& u, const StateVector& v, int k,
                                 const ModeWindow& win)
{
	auto t0 = Clock::now();
	const auto& spec = ctx.va.spec();
	Finding f = start("weak-commutativity", label(u, spec) + " , " + label(v, spec) + " ; k=" + std::to_string(k),
	                  &win);
	auto cells = win.cells();
	for (const auto& [p0, p] : cells)
		for (const auto& [q0, q] : cells)
			for (std::size_t s = 0; s < win.states.size(); ++s) {
				StateVector sum = weak_comm_coeff(ctx, u, v, k, p0, p, q0, q, win.states[s]);
				if (!sum.is_zero()) {
					fail(f, {{"k", k},
					         {"p", {p0, p.to_string()}},
					         {"q", {q0, q.to_string()}},
					         {"state", win.state_labels.at(s)},
					         {"lhs", format_state(sum, spec)},
					         {"rhs", "0"}});
					f.wall_ms = ms_since(t0);
					return f;
				}
			}
	f.wall_ms = ms_since(t0);
	return f;
}

Finding check_weak_associativity(const AxiomContext& ctx, const StateVector& u, const StateVector& v,
                                 const StateVector& w, int l, const ModeWindow& win)
{
	auto t0 = Clock::now();
	const auto& spec = ctx.va.spec();
	Finding f = start("weak-associativity",
	                  label(u, spec) + " , " + label(v, spec) + " , " + label(w, spec) + " ; l=" + std::to_string(l),
	                  &win);
	auto cells = win.cells();
	for (const auto& [m0, m] : cells)
		for (const auto& [k0, k] : cells) {
			AssocSides s = weak_assoc_coeff(ctx, u, v, w, l, m0, m, k0, k);
			if (s.lhs != s.rhs) {
				auto wit = sides(spec, s.lhs, s.rhs);
				wit["l"] = l;
				wit["z"] = {m0, m.to_string()};
				wit["y"] = {k0, k.to_string()};
				fail(f, wit);
				f.wall_ms = ms_since(t0);
				return f;
			}
		}
	f.wall_ms = ms_since(t0);
	return f;
}

Finding check_jacobi(const AxiomContext& ctx, const StateVector& u, const StateVector& v, const StateVector& w,
                     const ModeWindow& win, int cap)
{
	auto t0 = Clock::now();
	const auto& spec = ctx.va.spec();
	Finding f = start("jacobi", label(u, spec) + " , " + label(v, spec) + " , " + label(w, spec), &win);
	f.window["states"] = {label(w, spec)};
	ModeWindow wwin = single_state(win, w, label(w, spec));

	const int kmax = std::min(cap, order_bound(u, v));
	const int lmax = std::min(cap, order_bound(u, w));
	std::optional<int> k_found, l_found;
	Finding last_k, last_l;
	for (int k = 0; k <= kmax && !k_found; ++k) {
		last_k = check_weak_commutativity(ctx, u, v, k, wwin);
		if (last_k.passed())
			k_found = k;
	}
	for (int l = 0; l <= lmax && !l_found; ++l) {
		last_l = check_weak_associativity(ctx, u, v, w, l, wwin);
		if (last_l.passed())
			l_found = l;
	}
	f.witness = nlohmann::json::object();
	if (k_found)
		f.witness["k"] = *k_found;
	if (l_found)
		f.witness["l"] = *l_found;
	if (!k_found || !l_found) {
		// Within the degree bound the identities must hold; past the cap we cannot tell.
		bool capped = (!k_found && kmax < order_bound(u, v)) || (!l_found && lmax < order_bound(u, w));
		f.status = capped ? "cap-exceeded" : "fail";
		if (!k_found)
			f.witness["weak-commutativity"] = last_k.witness;
		if (!l_found)
			f.witness["weak-associativity"] = last_l.witness;
	}
	f.wall_ms = ms_since(t0);
	return f;
}

Finding check_skew_symmetry(const AxiomContext& ctx, const StateVector& u, const StateVector& v,
                            const ModeWindow& win)
{
	auto t0 = Clock::now();
	const auto& spec = ctx.va.spec();
	const auto& va = ctx.va;
	Finding f = start("skew-symmetry", label(u, spec) + " , " + label(v, spec), &win);
	auto cells = win.cells();
	const int du = deg0(u), dv = deg0(v);
	for (const auto& [m0, m] : cells)
		for (const auto& [k0, k] : cells)
			for (std::size_t s = 0; s < win.states.size(); ++s) {
				const auto& w = win.states[s];
				StateVector lhs = va.y_mode(va.product(u, m0, m, v), k0, k, w, ctx.W);
				StateVector rhs = skew_rhs(ctx, u, v, m0, m, k0, k, w);
				// second application, term by term
				StateVector twice;
				const MultiIndex km = k - m;
				for (int j = 0; m0 + j < du + dv; ++j) {
					Rational c(binomial(j - k0 - 1, j));
					if (c == 0)
						continue;
					if ((m0 + j + 1) % 2 != 0)
						c = -c;
					twice.add_scaled(skew_rhs(ctx, v, u, m0 + j, km, k0 - j, k, w), c);
				}
				if (lhs != rhs || lhs != twice) {
					auto wit = sides(spec, lhs, rhs);
					wit["twice"] = format_state(twice, spec);
					wit["z"] = {m0, m.to_string()};
					wit["y"] = {k0, k.to_string()};
					wit["state"] = win.state_labels.at(s);
					fail(f, wit);
					f.wall_ms = ms_since(t0);
					return f;
				}
			}
	f.wall_ms = ms_since(t0);
	return f;
}

Finding check_vacuum_lemma(const AxiomContext& ctx, const StateVector& u, const ModeWindow& win, int max_k)
{
	auto t0 = Clock::now();
	const auto& spec = ctx.va.spec();
	const auto& va = ctx.va;
	Finding f = start("vacuum-lemma", label(u, spec), &win);
	const StateVector one = StateVector::vacuum();
	auto box = win.m_values();
	auto done = [&](nlohmann::json wit) {
		fail(f, std::move(wit));
		f.wall_ms = ms_since(t0);
		return f;
	};
	for (int k = 0; k <= std::max(2, win.m0_hi); ++k)
		for (const auto& m : box) {
			StateVector s = va.product(u, k, m, one);
			if (!s.is_zero())
				return done({{"part", "u_(k,m)1 = 0"}, {"k", k}, {"m", m.to_string()}, {"value", format_state(s, spec)}});
		}
	for (int k = 0; k <= max_k; ++k)
		for (const auto& m : box) {
			StateVector s = va.product(u, -k - 1, m, one);
			for (const auto& [n0, n] : win.cells())
				for (std::size_t i = 0; i < win.states.size(); ++i) {
					const auto& w = win.states[i];
					StateVector lhs = va.y_mode(s, n0, n, w, ctx.W);
					StateVector rhs;
					if (n == m)
						rhs.add_scaled(va.y_mode(u, n0 - k, m, w, ctx.W), Rational(binomial(k - n0 - 1, k)));
					if (lhs != rhs) {
						auto wit = sides(spec, lhs, rhs);
						wit["part"] = "derivative formula";
						wit["k"] = k;
						wit["m"] = m.to_string();
						wit["n0"] = n0;
						wit["n"] = n.to_string();
						wit["state"] = win.state_labels.at(i);
						return done(wit);
					}
				}
		}
	for (const auto& [n0, n] : win.cells()) {
		StateVector slice = va.product(u, -1, n, one);
		for (std::size_t i = 0; i < win.states.size(); ++i) {
			const auto& w = win.states[i];
			StateVector lhs = va.y_mode(u, n0, n, w, ctx.W);
			StateVector rhs = va.y_mode(slice, n0, n, w, ctx.W);
			if (lhs != rhs) {
				auto wit = sides(spec, lhs, rhs);
				wit["part"] = "sum over slices";
				wit["n0"] = n0;
				wit["n"] = n.to_string();
				wit["state"] = win.state_labels.at(i);
				return done(wit);
			}
		}
	}
	f.wall_ms = ms_since(t0);
	return f;
}

Finding check_commutator_formula(const AxiomContext& ctx, const StateVector& u, const StateVector& v,
                                 const ModeWindow& win)
{
	auto t0 = Clock::now();
	const auto& spec = ctx.va.spec();
	const auto& va = ctx.va;
	Finding f = start("commutator-formula", label(u, spec) + " , " + label(v, spec), &win);
	auto cells = win.cells();
	const int bound = order_bound(u, v);
	for (const auto& [p0, m] : cells)
		for (const auto& [q0, q] : cells)
			for (std::size_t s = 0; s < win.states.size(); ++s) {
				const auto& w = win.states[s];
				StateVector lhs = va.y_mode(u, p0, m, va.y_mode(v, q0, q, w, ctx.W), ctx.W);
				lhs -= va.y_mode(v, q0, q, va.y_mode(u, p0, m, w, ctx.W), ctx.W);
				StateVector rhs;
				for (int i = 0; i < bound; ++i) {
					Rational c(binomial(p0, i));
					if (c == 0)
						break;
					StateVector uv = va.product(u, i, m, v);
					if (!uv.is_zero())
						rhs.add_scaled(va.y_mode(uv, p0 + q0 - i, q + m, w, ctx.W), c);
				}
				if (lhs != rhs) {
					auto wit = sides(spec, lhs, rhs);
					wit["p"] = {p0, m.to_string()};
					wit["q"] = {q0, q.to_string()};
					wit["state"] = win.state_labels.at(s);
					fail(f, wit);
					f.wall_ms = ms_since(t0);
					return f;
				}
			}
	f.wall_ms = ms_since(t0);
	return f;
}

Finding check_borcherds(const AxiomContext& ctx, const StateVector& u, const StateVector& v, const StateVector& w,
                        const ModeWindow& win, int samples, uint64_t seed)
{
	auto t0 = Clock::now();
	const auto& spec = ctx.va.spec();
	const auto& va = ctx.va;
	Finding f = start("borcherds", label(u, spec) + " , " + label(v, spec) + " , " + label(w, spec), &win);
	f.window["states"] = {label(w, spec)};
	std::mt19937_64 rng(seed);
	auto box = win.m_values();
	auto pick = [&](int lo, int hi) { return lo + static_cast<int>(rng() % static_cast<uint64_t>(hi - lo + 1)); };
	const int du = deg0(u), dv = deg0(v), dw = deg0(w);
	for (int t = 0; t < samples; ++t) {
		int L = pick(win.m0_lo, win.m0_hi), M = pick(win.m0_lo, win.m0_hi), N = pick(win.m0_lo, win.m0_hi);
		MultiIndex m = box[rng() % box.size()], k = box[rng() % box.size()];
		const MultiIndex km = k - m;
		StateVector lhs;
		for (int i = 0; L + i < du + dv; ++i) {
			Rational c(binomial(M, i));
			if (c == 0)
				break;
			StateVector uv = va.product(u, L + i, m, v);
			if (!uv.is_zero())
				lhs.add_scaled(va.y_mode(uv, M + N - i, k, w, ctx.W), c);
		}
		StateVector rhs;
		for (int i = 0;; ++i) {
			bool first = N + i < dv + dw;
			bool second = M + i < du + dw;
			if (!first && !second)
				break;
			Rational c = signed_binomial(L, i, i % 2);
			if (c == 0)
				break;
			if (first)
				rhs.add_scaled(va.y_mode(u, M + L - i, m, va.y_mode(v, N + i, km, w, ctx.W), ctx.W), c);
			if (second)
				rhs.add_scaled(va.y_mode(v, L + N - i, km, va.y_mode(u, M + i, m, w, ctx.W), ctx.W),
				               L % 2 == 0 ? Rational(-c) : c);
		}
		if (lhs != rhs) {
			auto wit = sides(spec, lhs, rhs);
			wit["LMN"] = {L, M, N};
			wit["m"] = m.to_string();
			wit["k"] = k.to_string();
			fail(f, wit);
			break;
		}
	}
	f.wall_ms = ms_since(t0);
	return f;
}

Finding check_module_law(const RestrictedModule& W, const ModeWindow& win)
{
	auto t0 = Clock::now();
	const auto& spec = W.spec();
	Finding f = start("module.law", W.name(), &win);
	std::vector<LoopMode> modes;
	for (const auto& [n0, n] : win.cells())
		for (int a = 0; a < spec.dim(); ++a)
			modes.push_back(LoopMode{a, n0, n});
	for (std::size_t i = 0; i < modes.size(); ++i)
		for (std::size_t j = i + 1; j < modes.size(); ++j)
			for (std::size_t s = 0; s < win.states.size(); ++s) {
				const auto& x = modes[i];
				const auto& y = modes[j];
				const auto& w = win.states[s];
				StateVector lhs = W.act(x, W.act(y, w)) - W.act(y, W.act(x, w));
				LoopBracket br = bracket_modes(spec, x, y);
				StateVector rhs;
				for (const auto& [mode, c] : br.loop)
					rhs.add_scaled(W.act(mode, w), c);
				rhs.add_scaled(w, br.central * W.level());
				if (lhs != rhs) {
					auto wit = sides(spec, lhs, rhs);
					wit["x"] = mode_to_string(spec, x);
					wit["y"] = mode_to_string(spec, y);
					wit["state"] = win.state_labels.at(s);
					fail(f, wit);
					f.wall_ms = ms_since(t0);
					return f;
				}
			}
	f.wall_ms = ms_since(t0);
	return f;
}

Finding check_restrictedness(const RestrictedModule& W, const ModeWindow& win)
{
	auto t0 = Clock::now();
	const auto& spec = W.spec();
	Finding f = start("module.restricted", W.name(), &win);
	auto box = win.m_values();
	for (std::size_t s = 0; s < win.states.size(); ++s) {
		const auto& w = win.states[s];
		const int N = W.vanishing_bound(w);
		auto degs = w.degrees();
		for (int a = 0; a < spec.dim(); ++a)
			for (const auto& n : box) {
				for (int n0 = N + 1; n0 <= N + 3; ++n0) {
					StateVector r = W.act(LoopMode{a, n0, n}, w);
					if (!r.is_zero()) {
						fail(f, {{"state", win.state_labels.at(s)},
						         {"witness", N},
						         {"mode", mode_to_string(spec, LoopMode{a, n0, n})},
						         {"value", format_state(r, spec)}});
						f.wall_ms = ms_since(t0);
						return f;
					}
				}
				if (degs.size() != 1)
					continue;
				const int d = *degs.begin();
				for (int n0 = win.m0_lo; n0 <= win.m0_hi; ++n0) {
					StateVector r = W.act(LoopMode{a, n0, n}, w);
					for (int e : r.degrees())
						if (e != d - n0) {
							fail(f, {{"state", win.state_labels.at(s)},
							         {"mode", mode_to_string(spec, LoopMode{a, n0, n})},
							         {"expected_degree", d - n0},
							         {"found_degree", e}});
							f.wall_ms = ms_since(t0);
							return f;
						}
				}
			}
	}
	f.witness = {{"note", "witness N0 = max degree of each state"}};
	f.wall_ms = ms_since(t0);
	return f;
}

Finding check_base_table(const VertexAlgebra& va, const ModeWindow& win)
{
	auto t0 = Clock::now();
	const auto& spec = va.spec();
	Finding f = start("module.base-table", "level " + to_string(va.algebra().level()), &win);
	const Rational& level = va.algebra().level();
	for (int a = 0; a < spec.dim(); ++a)
		for (int b = 0; b < spec.dim(); ++b)
			for (const auto& m : win.m_values())
				for (int m0 = 0; m0 <= std::max(3, win.m0_hi); ++m0) {
					StateVector got = va.product(StateVector::tail(a), m0, m, StateVector::tail(b));
					StateVector want;
					if (m0 == 0)
						for (const auto& t : spec.bracket(a, b))
							want.add_scaled(StateVector::tail(t.index), t.coeff);
					if (m0 == 1)
						want.add_scaled(StateVector::vacuum(), level * spec.form(a, b));
					if (got != want) {
						auto wit = sides(spec, got, want);
						wit["a"] = spec.name(a);
						wit["b"] = spec.name(b);
						wit["m0"] = m0;
						wit["m"] = m.to_string();
						fail(f, wit);
						f.wall_ms = ms_since(t0);
						return f;
					}
				}
	f.wall_ms = ms_since(t0);
	return f;
}

Finding check_locality_table(const FieldEngine& fe, const ModeWindow& win, int bound)
{
	auto t0 = Clock::now();
	const auto& spec = fe.module().spec();
	Finding f = start("field.locality-table", fe.module().name(), &win);
	nlohmann::json orders = nlohmann::json::object();
	std::vector<FieldHandle> cur;
	for (int a = 0; a < spec.dim(); ++a)
		cur.push_back(fe.current(a));
	for (int a = 0; a < spec.dim(); ++a)
		for (int b = 0; b < spec.dim(); ++b) {
			int expected = 0;
			if (fe.module().level() * spec.form(a, b) != 0)
				expected = 2;
			else if (!spec.bracket(a, b).empty())
				expected = 1;
			auto k = fe.locality_order(cur[a], cur[b], win, bound);
			std::string key = spec.name(a) + "," + spec.name(b);
			orders[key] = k ? nlohmann::json(*k) : nlohmann::json("exceeds bound");
			if (!k || *k != expected) {
				f.status = "fail";
				orders[key + " expected"] = expected;
			}
		}
	f.witness = orders;
	f.wall_ms = ms_since(t0);
	return f;
}

Finding check_lie_spec(const LieAlgebraSpec& spec)
{
	auto t0 = Clock::now();
	Finding f = start("lie.validate", "dim " + std::to_string(spec.dim()), nullptr);
	ValidationReport r = validate_lie_spec(spec);
	if (!r.ok) {
		nlohmann::json triple = nlohmann::json::array();
		for (int i : r.triple)
			triple.push_back(spec.name(i));
		fail(f, {{"violated", r.identity}, {"basis", triple}, {"detail", r.detail}});
	}
	f.wall_ms = ms_since(t0);
	return f;
}

Finding check_toroidal_jacobi(const LieAlgebraSpec& spec, int rank, int triples, int radius, uint64_t seed)
{
	auto t0 = Clock::now();
	Finding f = start("lie.toroidal-jacobi", std::to_string(triples) + " random triples, radius " +
	                                             std::to_string(radius), nullptr);
	std::mt19937_64 rng(seed);
	auto pick = [&](int lo, int hi) { return lo + static_cast<int>(rng() % static_cast<uint64_t>(hi - lo + 1)); };
	auto random_element = [&]() {
		ToroidalElement x(rank);
		int terms = pick(1, 2);
		for (int t = 0; t < terms; ++t) {
			MultiIndex m(rank);
			for (int i = 0; i < rank; ++i)
				m[i] = pick(-radius, radius);
			x.add_loop(LoopMode{pick(0, spec.dim() - 1), pick(-radius, radius), m}, Rational(pick(1, 3)));
		}
		if (rng() % 4 == 0)
			x.add_der(pick(0, rank), Rational(pick(1, 2)));
		if (rng() % 4 == 0)
			x.add_central(Rational(1));
		return x;
	};
	for (int t = 0; t < triples; ++t) {
		ToroidalElement x = random_element(), y = random_element(), z = random_element();
		ToroidalElement sum = toroidal_bracket(spec, toroidal_bracket(spec, x, y), z);
		sum += toroidal_bracket(spec, toroidal_bracket(spec, y, z), x);
		sum += toroidal_bracket(spec, toroidal_bracket(spec, z, x), y);
		ToroidalElement anti = toroidal_bracket(spec, x, y) + toroidal_bracket(spec, y, x);
		if (!sum.is_zero() || !anti.is_zero()) {
			fail(f, {{"x", x.to_string(spec)},
			         {"y", y.to_string(spec)},
			         {"z", z.to_string(spec)},
			         {"jacobi_sum", sum.to_string(spec)},
			         {"antisymmetry", anti.to_string(spec)}});
			break;
		}
	}
	f.wall_ms = ms_since(t0);
	return f;
}

StateVector random_state(std::mt19937_64& rng, const RestrictedModule& V, const std::vector<MultiIndex>& box,
                         int max_len, int max_k)
{
	const int dim = V.spec().dim();
	int len = static_cast<int>(rng() % static_cast<uint64_t>(max_len + 1));
	int tail = (rng() % 2) ? static_cast<int>(rng() % static_cast<uint64_t>(dim)) : PBWMonomial::kVacuum;
	StateVector s = StateVector::basis(PBWMonomial{{}, tail});
	for (int i = 0; i < len; ++i) {
		LoopMode x{static_cast<int>(rng() % static_cast<uint64_t>(dim)),
		           -1 - static_cast<int>(rng() % static_cast<uint64_t>(max_k)), box[rng() % box.size()]};
		s = V.act(x, s);
	}
	return s;
}

bool SuiteReport::all_passed() const
{
	for (const auto& f : findings)
		if (!f.passed())
			return false;
	return true;
}

bool SuiteReport::cap_exceeded() const
{
	for (const auto& f : findings)
		if (f.status == "cap-exceeded")
			return true;
	return false;
}

nlohmann::json SuiteReport::to_json() const
{
	nlohmann::json arr = nlohmann::json::array();
	for (const auto& f : findings)
		arr.push_back(f.to_json());
	return arr;
}

std::vector<Finding> run_jobs(const std::vector<SuiteJob>& jobs, int threads, PersistentCache* cache,
                              const std::string& session_key)
{
	std::vector<Finding> out(jobs.size());
	std::atomic<std::size_t> next{0};
	auto worker = [&]() {
		while (true) {
			std::size_t i = next.fetch_add(1);
			if (i >= jobs.size())
				return;
			std::string key = cache ? PersistentCache::key(session_key, jobs[i].key) : std::string();
			if (cache) {
				if (auto hit = cache->get(key)) {
					out[i] = Finding::from_json(*hit);
					continue;
				}
			}
			try {
				out[i] = jobs[i].run();
			} catch (const std::exception& e) {
				out[i].identity = jobs[i].key.substr(0, jobs[i].key.find('|'));
				out[i].paper_ref = identity_reference(out[i].identity);
				out[i].subject = jobs[i].key;
				out[i].status = "error";
				out[i].witness = {{"exception", e.what()}};
			}
			if (cache && out[i].status != "error")
				cache->put(key, out[i].to_json());
		}
	};
	threads = std::max(1, threads);
	std::vector<std::thread> pool;
	for (int t = 1; t < threads; ++t)
		pool.emplace_back(worker);
	worker();
	for (auto& t : pool)
		t.join();
	return out;
}

namespace {

std::string job_key(const std::string& id, const std::string& subject, const ModeWindow* win)
{
	return id + "|" + subject + "|" + (win ? win->to_json().dump() : std::string());
}

}  // namespace

SuiteReport run_suite(const VacuumModule& V, const VertexAlgebra& va, const SuiteOptions& opt)
{
	const auto& spec = V.spec();
	const ModeWindow& win = opt.window;
	const ModeWindow& twin = opt.triple_window;
	std::vector<SuiteJob> jobs;
	auto add = [&](const std::string& id, const std::string& subject, const ModeWindow* w, std::function<Finding()> fn) {
		jobs.push_back({job_key(id, subject, w), std::move(fn)});
	};
	AxiomContext ctx{va, V};
	const auto& gens = opt.generators;
	const auto& glab = opt.generator_labels;

	add("lie.validate", "spec", nullptr, [&] { return check_lie_spec(spec); });
	add("lie.toroidal-jacobi", "random", nullptr,
	    [&] { return check_toroidal_jacobi(spec, V.rank(), opt.toroidal_triples, 3, opt.seed); });
	add("module.base-table", "table", &win, [&] { return check_base_table(va, win); });
	add("module.law", "V", &twin, [&] { return check_module_law(V, twin); });
	add("module.restricted", "V", &win, [&] { return check_restrictedness(V, win); });
	add("field.locality-table", "currents", &twin, [&] {
		FieldEngine fe(va, V);
		return check_locality_table(fe, twin, 4);
	});
	add("field.transfer", "currents", &twin, [&] {
		auto t0 = Clock::now();
		FieldEngine fe(va, V);
		Finding f = start("field.transfer", "generator pairs", &twin);
		for (int a = 0; a < spec.dim() && f.passed(); ++a)
			for (int b = 0; b < spec.dim() && f.passed(); ++b) {
				std::vector<std::pair<Rational, FieldHandle>> c0;
				for (const auto& t : spec.bracket(a, b))
					c0.push_back({t.coeff, fe.current(t.index)});
				std::vector<FieldHandle> cs{fe.linear(c0), fe.scaled(V.level() * spec.form(a, b), fe.identity())};
				for (const auto& m : twin.m_values()) {
					CheckOutcome r = fe.transfer_check(fe.current(a), fe.current(b), cs, m, twin);
					if (!r.ok) {
						fail(f, r.witness);
						f.witness["pair"] = spec.name(a) + "," + spec.name(b);
						break;
					}
				}
			}
		f.wall_ms = ms_since(t0);
		return f;
	});

	for (std::size_t i = 0; i < gens.size(); ++i)
		add("creation", glab[i], &win, [&, i] {
			auto t0 = Clock::now();
			Finding f = start("creation", glab[i], &win);
			CheckOutcome r = va.creation_check(gens[i], win);
			if (!r.ok)
				fail(f, r.witness);
			f.wall_ms = ms_since(t0);
			return f;
		});

	// Triple identities on generators acting on generators and on window states.
	std::vector<std::pair<StateVector, std::string>> targets;
	for (std::size_t i = 0; i < gens.size(); ++i)
		targets.push_back({gens[i], glab[i]});
	for (std::size_t i = 0; i < twin.states.size(); ++i)
		targets.push_back({twin.states[i], twin.state_labels[i]});
	for (std::size_t i = 0; i < gens.size(); ++i)
		for (std::size_t j = 0; j < gens.size(); ++j) {
			for (const auto& [w, wl] : targets)
				add("jacobi", glab[i] + "," + glab[j] + "," + wl, &twin,
				    [&, i, j, w = w] { return check_jacobi(ctx, gens[i], gens[j], w, twin, opt.cap); });
			add("skew-symmetry", glab[i] + "," + glab[j], &twin,
			    [&, i, j] { return check_skew_symmetry(ctx, gens[i], gens[j], twin); });
			add("commutator-formula", glab[i] + "," + glab[j], &twin,
			    [&, i, j] { return check_commutator_formula(ctx, gens[i], gens[j], twin); });
		}

	// Random depth <= 2 triples.
	std::mt19937_64 rng(opt.seed);
	auto box = twin.m_values();
	struct Triple {
		StateVector u, v, w;
	};
	std::vector<Triple> randoms;
	for (int t = 0; t < opt.random_triples; ++t) {
		Triple tr;
		tr.u = random_state(rng, V, box, 2, 2);
		tr.v = random_state(rng, V, box, 2, 2);
		do
			tr.w = random_state(rng, V, box, 1, 1);
		while (tr.w.max_degree() > 2);
		randoms.push_back(std::move(tr));
	}
	for (std::size_t t = 0; t < randoms.size(); ++t) {
		const auto& tr = randoms[t];
		std::string subj = "random#" + std::to_string(t);
		add("jacobi", subj + ":" + format_state(tr.u, spec) + "," + format_state(tr.v, spec) + "," +
		                  format_state(tr.w, spec),
		    &twin, [&, t] { return check_jacobi(ctx, randoms[t].u, randoms[t].v, randoms[t].w, twin, opt.cap); });
		add("borcherds", subj, &twin, [&, t] {
			return check_borcherds(ctx, randoms[t].u, randoms[t].v, randoms[t].w, twin, opt.borcherds_samples,
			                       opt.seed + t);
		});
	}
	for (std::size_t t = 0; t < randoms.size() && t < 10; ++t)
		add("vacuum-lemma", "random#" + std::to_string(t) + ":" + format_state(randoms[t].u, spec), &twin,
		    [&, t] { return check_vacuum_lemma(ctx, randoms[t].u, twin); });
	for (std::size_t i = 0; i < gens.size(); ++i)
		add("vacuum-lemma", glab[i], &twin, [&, i] { return check_vacuum_lemma(ctx, gens[i], twin); });

	// Module built on a twisted action.
	std::unique_ptr<TwistedModule> tw;
	if (opt.twisted) {
		tw = std::make_unique<TwistedModule>(V, TwistedModule::default_sigma(spec), std::vector<int>(V.rank(), -1));
		const TwistedModule* twp = tw.get();
		add("module.law", twp->name(), &twin, [&, twp] { return check_module_law(*twp, twin); });
		add("module.restricted", twp->name(), &win, [&, twp] { return check_restrictedness(*twp, win); });
		for (std::size_t i = 0; i < gens.size(); ++i)
			for (std::size_t j = 0; j < gens.size(); ++j)
				for (const auto& [w, wl] : targets)
					add("jacobi", "twisted:" + glab[i] + "," + glab[j] + "," + wl, &twin, [&, i, j, twp, w = w] {
						Finding f = check_jacobi(AxiomContext{va, *twp}, gens[i], gens[j], w, twin, opt.cap);
						f.subject = "W=" + twp->name() + " : " + f.subject;
						return f;
					});
	}

	if (opt.v0) {
		add("v0.dimensions", "build", &win, [&] {
			auto t0 = Clock::now();
			Finding f = start("v0.dimensions", "depth " + std::to_string(opt.v0_depth), &win);
			V0Options vo;
			vo.depth = opt.v0_depth;
			vo.max_degree = opt.v0_max_degree;
			vo.min_m0 = -opt.v0_max_degree;
			vo.box = twin.m_values();
			V0Subspace sub = build_V0(va, vo);
			nlohmann::json dims = nlohmann::json::object();
			for (const auto& [d, n] : sub.box_dims)
				dims[std::to_string(d)] = {{"box", n}, {"expected", sub.expected_box_dims[d]},
				                           {"span", sub.graded_dims[d]}};
			f.witness = {{"dimensions", dims}, {"tails_absent", sub.tails_absent},
			             {"contains_vacuum", sub.contains_vacuum}};
			if (sub.box_dims != sub.expected_box_dims || !sub.tails_absent || !sub.contains_vacuum)
				f.status = "fail";
			f.wall_ms = ms_since(t0);
			return f;
		});
		for (int a = 0; a < spec.dim(); ++a)
			for (int b = 0; b < spec.dim(); ++b)
				add("v0.affine", spec.name(a) + "," + spec.name(b), &twin, [&, a, b] {
					auto t0 = Clock::now();
					Finding f = start("v0.affine", spec.name(a) + "," + spec.name(b), &twin);
					CheckOutcome r = va.v0_affine_commutator(a, b, twin, V);
					if (!r.ok)
						fail(f, r.witness);
					f.wall_ms = ms_since(t0);
					return f;
				});
		std::vector<std::pair<StateVector, std::string>> v0_states;
		for (int a = 0; a < spec.dim(); ++a)
			for (const auto& m : box)
				v0_states.push_back(
				    {StateVector::basis(PBWMonomial{{LoopMode{a, -1, m}}, PBWMonomial::kVacuum}),
				     spec.name(a) + "(-1," + m.to_string() + ")1"});
		std::mt19937_64 vrng(opt.seed ^ 0x5eed);
		for (int t = 0; t < 6; ++t) {
			StateVector s;
			do
				s = random_state(vrng, V, box, 2, 2);
			while (monomial(s.terms().begin()->first).tail != PBWMonomial::kVacuum);
			v0_states.push_back({s, format_state(s, spec)});
		}
		for (std::size_t i = 0; i < v0_states.size(); ++i) {
			add("v0.creation", v0_states[i].second, &twin, [&, i, v0_states] {
				auto t0 = Clock::now();
				Finding f = start("v0.creation", v0_states[i].second, &twin);
				CheckOutcome r = va.v0_creation(v0_states[i].first, twin);
				if (!r.ok)
					fail(f, r.witness);
				CheckOutcome d = va.d0_check(v0_states[i].first);
				if (r.ok && !d.ok) {
					fail(f, d.witness);
					f.identity = "v0.d0";
				}
				CheckOutcome p = va.precover_roundtrip(v0_states[i].first, twin, V);
				if (r.ok && d.ok && !p.ok) {
					fail(f, p.witness);
					f.identity = "v0.precover";
				}
				f.wall_ms = ms_since(t0);
				return f;
			});
		}
		std::vector<std::pair<StateVector, std::string>> recon = v0_states;
		for (std::size_t i = 0; i < gens.size(); ++i)
			recon.push_back({gens[i], glab[i]});
		for (std::size_t t = 0; t < randoms.size() && t < 6; ++t)
			recon.push_back({randoms[t].u, format_state(randoms[t].u, spec)});
		for (std::size_t i = 0; i < recon.size(); ++i)
			add("v0.reconstruction", recon[i].second, &twin, [&, i, recon] {
				auto t0 = Clock::now();
				Finding f = start("v0.reconstruction", recon[i].second, &twin);
				CheckOutcome r = va.reconstruction(recon[i].first, twin, V);
				if (!r.ok)
					fail(f, r.witness);
				f.wall_ms = ms_since(t0);
				return f;
			});
		add("v0.borcherds", "currents", &twin, [&, v0_states] {
			auto t0 = Clock::now();
			Finding f = start("v0.borcherds", "vacuum-ideal triples", &twin);
			std::mt19937_64 brng(opt.seed + 17);
			for (int t = 0; t < 12 && f.passed(); ++t) {
				const auto& u = v0_states[brng() % v0_states.size()].first;
				const auto& v = v0_states[brng() % v0_states.size()].first;
				const auto& w = v0_states[brng() % v0_states.size()].first;
				int L = -2 + static_cast<int>(brng() % 4), M = -2 + static_cast<int>(brng() % 4),
				    N = -2 + static_cast<int>(brng() % 4);
				CheckOutcome r = va.v0_borcherds(u, v, w, L, M, N, V);
				if (!r.ok)
					fail(f, r.witness);
			}
			f.wall_ms = ms_since(t0);
			return f;
		});
		add("v0.injectivity", "probe", &twin, [&] {
			auto t0 = Clock::now();
			Finding f = start("v0.injectivity", "PBW monomials of degree <= 2", &twin);
			f.status = "info";
			nlohmann::json kernel = nlohmann::json::array();
			for (const auto& mono : enumerate_monomials(spec, box, 2, false)) {
				StateVector s = StateVector::basis(mono);
				if (va.y_mode(s, -1, mono.t_degree(V.rank()), StateVector::vacuum()).is_zero())
					kernel.push_back(format_monomial(mono, spec));
			}
			for (const auto& mono : enumerate_monomials(spec, box, 2, true)) {
				StateVector s = StateVector::basis(mono);
				bool zero = true;
				for (const auto& [n0, n] : twin.cells())
					if (!va.y_mode(s, n0, n, StateVector::vacuum()).is_zero()) {
						zero = false;
						break;
					}
				if (zero)
					kernel.push_back(format_monomial(mono, spec));
			}
			f.witness = {{"zero_on_window", kernel}};
			f.wall_ms = ms_since(t0);
			return f;
		});
	}

	SuiteReport report;
	report.findings = run_jobs(jobs, opt.jobs, opt.cache, opt.session_key);
	return report;
}

std::vector<Mutation> standard_mutations(const LieAlgebraSpec& spec)
{
	std::vector<Mutation> out;
	const int n = spec.dim();
	for (int i = 0; i < n; ++i)
		for (int j = 0; j < n; ++j)
			for (int k = 0; k < n; ++k) {
				LieAlgebraSpec s = spec;
				std::vector<BracketTerm> terms = s.bracket(i, j);
				bool found = false;
				for (auto& t : terms)
					if (t.index == k) {
						t.coeff += 1;
						found = true;
					}
				if (!found)
					terms.push_back({k, Rational(1)});
				s.set_bracket(i, j, terms);
				out.push_back({"bracket[" + spec.name(i) + "," + spec.name(j) + "]_" + spec.name(k) + " += 1", s, 0});
			}
	for (int i = 0; i < n; ++i)
		for (int j = 0; j < n; ++j) {
			LieAlgebraSpec s = spec;
			s.set_form(i, j, spec.form(i, j) + 1);
			out.push_back({"form<" + spec.name(i) + "," + spec.name(j) + "> += 1", s, 0});
		}
	for (int i = 0; i < n; ++i)
		for (int j = i + 1; j < n; ++j) {
			LieAlgebraSpec t = spec;
			t.set_form(i, j, spec.form(i, j) + 1);
			t.set_form(j, i, spec.form(j, i) + 1);
			out.push_back({"form<" + spec.name(i) + "," + spec.name(j) + "> symmetric += 1", t, 0});
		}
	out.push_back({"central term: level -> level + 1 while commuting", spec, 1});
	return out;
}

std::vector<MutationResult> run_mutations(const LieAlgebraSpec& spec, int rank, const Rational& level,
                                          const SuiteOptions& opt)
{
	auto mutations = standard_mutations(spec);
	std::vector<SuiteJob> jobs;
	for (std::size_t i = 0; i < mutations.size(); ++i)
		jobs.push_back({"mutation|" + mutations[i].label, [&, i] {
			                auto t0 = Clock::now();
			                const Mutation& mu = mutations[i];
			                VacuumModule V(mu.spec, rank, level, std::size_t{1} << 18);
			                V.set_central_shift(mu.central_shift);
			                VertexAlgebra va(V, std::size_t{1} << 18);
			                AxiomContext ctx{va, V};
			                std::vector<Finding> fs;
			                fs.push_back(check_lie_spec(mu.spec));
			                fs.push_back(check_toroidal_jacobi(mu.spec, rank, 40, 2, opt.seed));
			                fs.push_back(check_module_law(V, opt.triple_window));
			                for (std::size_t a = 0; a < opt.generators.size(); ++a)
				                for (std::size_t b = 0; b < opt.generators.size(); ++b)
					                fs.push_back(check_jacobi(ctx, opt.generators[a], opt.generators[b],
					                                          StateVector::vacuum(), opt.triple_window, opt.cap));
			                Finding f = start("mutation", mu.label, &opt.triple_window);
			                nlohmann::json caught = nlohmann::json::array();
			                for (const auto& x : fs)
				                if (!x.passed())
					                caught.push_back(x.identity + (x.identity == "jacobi" ? " " + x.subject : ""));
			                f.status = caught.empty() ? "fail" : "pass";
			                f.witness = {{"caught_by", caught}};
			                f.wall_ms = ms_since(t0);
			                return f;
		                }});
	auto findings = run_jobs(jobs, opt.jobs);
	std::vector<MutationResult> out;
	for (std::size_t i = 0; i < findings.size(); ++i) {
		MutationResult r;
		r.label = mutations[i].label;
		r.detected = findings[i].status == "pass";
		if (findings[i].witness.contains("caught_by"))
			for (const auto& c : findings[i].witness["caught_by"])
				r.caught_by.push_back(c.get<std::string>());
		else if (findings[i].status == "error")
			r.caught_by.push_back("error: " + findings[i].witness.dump());
		out.push_back(std::move(r));
	}
	return out;
}

}  // namespace tva
