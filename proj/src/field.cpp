#include "tva/field.hpp"

#include "tva/state_io.hpp"

#include <algorithm>
#include <atomic>
#include <unordered_map>

namespace tva {

namespace {

std::atomic<uint64_t> next_node{1};

}  // namespace

FieldEngine::FieldEngine(const VertexAlgebra& va, const RestrictedModule& W, FieldOptions opt)
    : va_(va), W_(W), opt_(opt), cache_(opt.cache_entries)
{
}

FieldHandle FieldEngine::make(FieldNode node) const
{
	node.id = next_node.fetch_add(1);
	return std::make_shared<const FieldNode>(std::move(node));
}

FieldHandle FieldEngine::current(int a) const
{
	if (a < 0 || a >= W_.spec().dim())
		throw std::out_of_range("basis index out of range");
	FieldNode n;
	n.kind = FieldKind::Current;
	n.basis = a;
	n.weight = 1;
	n.provenance = W_.spec().name(a) + "(x0,x)";
	return make(std::move(n));
}

FieldHandle FieldEngine::identity() const
{
	FieldNode n;
	n.kind = FieldKind::Identity;
	n.weight = 0;
	n.provenance = "1_W";
	return make(std::move(n));
}

FieldHandle FieldEngine::vertex(const StateVector& v) const
{
	FieldNode n;
	n.kind = FieldKind::Vertex;
	n.state = v;
	n.weight = std::max(0, v.max_degree());
	n.provenance = "Y(" + format_state(v, W_.spec()) + ")";
	return make(std::move(n));
}

FieldHandle FieldEngine::linear(std::vector<std::pair<Rational, FieldHandle>> terms) const
{
	FieldNode n;
	n.kind = FieldKind::Linear;
	n.weight = 0;
	bool first = true;
	for (const auto& [c, h] : terms) {
		n.weight = first ? h->weight : std::max(n.weight, h->weight);
		n.provenance += (first ? "" : " + ") + to_string(c) + "*" + h->provenance;
		first = false;
	}
	if (first)
		n.provenance = "0";
	n.terms = std::move(terms);
	return make(std::move(n));
}

FieldHandle FieldEngine::e_product_unchecked(const FieldHandle& a, int m0, const MultiIndex& m,
                                             const FieldHandle& b) const
{
	if (m.rank() != W_.rank())
		throw std::invalid_argument("product index rank mismatch");
	FieldNode n;
	n.kind = FieldKind::Product;
	n.a = a;
	n.b = b;
	n.m0 = m0;
	n.m = m;
	n.weight = a->weight + b->weight - m0 - 1;
	n.provenance = "(" + a->provenance + ")_(" + std::to_string(m0) + "," + m.to_string() + ")(" + b->provenance + ")";
	return make(std::move(n));
}

FieldHandle FieldEngine::e_product(const FieldHandle& a, int m0, const MultiIndex& m, const FieldHandle& b,
                                   const ModeWindow& win) const
{
	if (!locality_order(a, b, win, opt_.locality_bound))
		throw LocalityError("fields " + a->provenance + " and " + b->provenance + " are not local within order " +
		                    std::to_string(opt_.locality_bound) + " on the window");
	return e_product_unchecked(a, m0, m, b);
}

FieldHandle FieldEngine::apply_D(int i, const FieldHandle& a) const
{
	if (i < 0 || i > W_.rank())
		throw std::out_of_range("derivation index must lie in [0, r]");
	FieldNode n;
	n.kind = FieldKind::Derivative;
	n.direction = i;
	n.a = a;
	n.weight = i == 0 ? a->weight + 1 : a->weight;
	n.provenance = "D" + std::to_string(i) + "(" + a->provenance + ")";
	return make(std::move(n));
}

StateVector FieldEngine::mode(const FieldHandle& h, int n0, const MultiIndex& n, const StateVector& w) const
{
	StateVector out;
	for (const auto& [wid, c] : w.terms()) {
		auto part = mode_monomial(h, n0, n, wid);
		if (!part->is_zero())
			out.add_scaled(*part, c);
	}
	return out;
}

std::shared_ptr<const StateVector> FieldEngine::mode_monomial(const FieldHandle& h, int n0, const MultiIndex& n,
                                                              MonoId w) const
{
	Key key{h->id, n0, n, w};
	if (auto hit = cache_.find(key))
		return hit;
	auto value = std::make_shared<const StateVector>(compute(h, n0, n, w));
	cache_.insert(key, value);
	return value;
}

StateVector FieldEngine::compute(const FieldHandle& h, int n0, const MultiIndex& n, MonoId wid) const
{
	const int dw = MonomialTable::instance().degree(wid);
	if (n0 >= dw + h->weight && h->kind != FieldKind::Linear)
		return {};
	const StateVector w = StateVector::basis(wid);
	switch (h->kind) {
	case FieldKind::Identity:
		return (n0 == -1 && n.is_zero()) ? w : StateVector{};
	case FieldKind::Current:
		return *W_.act_monomial(LoopMode{h->basis, n0, n}, wid);
	case FieldKind::Vertex:
		return va_.y_mode(h->state, n0, n, w, W_);
	case FieldKind::Derivative: {
		if (h->direction == 0) {
			if (n0 == 0)
				return {};
			StateVector r = mode(h->a, n0 - 1, n, w);
			r *= Rational(-n0);
			return r;
		}
		int ni = n[h->direction - 1];
		if (ni == 0)
			return {};
		StateVector r = mode(h->a, n0, n, w);
		r *= Rational(-ni);
		return r;
	}
	case FieldKind::Linear: {
		StateVector r;
		for (const auto& [c, t] : h->terms)
			r.add_scaled(mode(t, n0, n, w), c);
		return r;
	}
	case FieldKind::Product:
		break;
	}

	// (a_{(m0,m)} b)(k0, k) w = sum_i (-1)^i C(m0, i) [ a(m0-i, m) b(k0+i, k-m) w
	//                                                  - (-1)^{m0} b(m0+k0-i, k-m) a(i, m) w ]
	const FieldHandle& a = h->a;
	const FieldHandle& b = h->b;
	const int m0 = h->m0;
	const MultiIndex km = n - h->m;
	int first_terms = dw + b->weight - n0;
	int second_terms = dw + a->weight;
	if (m0 >= 0) {
		first_terms = std::min(first_terms, m0 + 1);
		second_terms = std::min(second_terms, m0 + 1);
	}
	if (first_terms > opt_.max_sum_terms || second_terms > opt_.max_sum_terms)
		throw FinitenessError("mode product sum for " + h->provenance + " needs more than " +
		                      std::to_string(opt_.max_sum_terms) + " terms");
	StateVector out;
	Rational c;
	for (int i = 0; i < first_terms; ++i) {
		StateVector bw = mode(b, n0 + i, km, w);
		if (bw.is_zero())
			continue;
		c = binomial(m0, i);
		if (i % 2)
			c = -c;
		out.add_scaled(mode(a, m0 - i, h->m, bw), c);
	}
	for (int i = 0; i < second_terms; ++i) {
		StateVector aw = mode(a, i, h->m, w);
		if (aw.is_zero())
			continue;
		c = binomial(m0, i);
		if ((i + m0) % 2 == 0)
			c = -c;
		out.add_scaled(mode(b, m0 + n0 - i, km, aw), c);
	}
	return out;
}

CheckOutcome FieldEngine::locality_at(const FieldHandle& a, const FieldHandle& b, int k, const ModeWindow& win) const
{
	CheckOutcome res;
	auto cells = win.cells();
	for (const auto& [p0, p] : cells)
		for (const auto& [q0, q] : cells)
			for (std::size_t s = 0; s < win.states.size(); ++s) {
				const auto& w = win.states[s];
				++res.coefficients;
				StateVector sum;
				for (int i = 0; i <= k; ++i) {
					Rational c = binomial(k, i);
					if (i % 2)
						c = -c;
					sum.add_scaled(mode(a, p0 + k - i, p, mode(b, q0 + i, q, w)), c);
					sum.add_scaled(mode(b, q0 + i, q, mode(a, p0 + k - i, p, w)), -c);
				}
				if (!sum.is_zero()) {
					res.ok = false;
					res.witness = {{"k", k},
					               {"p", {p0, p.to_string()}},
					               {"q", {q0, q.to_string()}},
					               {"state", win.state_labels.at(s)},
					               {"value", format_state(sum, W_.spec())}};
					return res;
				}
			}
	return res;
}

std::optional<int> FieldEngine::locality_order(const FieldHandle& a, const FieldHandle& b, const ModeWindow& win,
                                               int bound) const
{
	if (win.empty() || win.states.empty())
		throw std::invalid_argument("locality_order needs a nonempty window with test states");
	if (bound < 0)
		throw std::invalid_argument("locality bound must be nonnegative");
	auto key = std::make_tuple(a->id, b->id, bound, win.to_json().dump());
	{
		std::lock_guard lock(locality_mutex_);
		auto it = locality_memo_.find(key);
		if (it != locality_memo_.end())
			return it->second;
	}
	std::optional<int> found;
	for (int k = 0; k <= bound; ++k)
		if (locality_at(a, b, k, win).ok) {
			found = k;
			break;
		}
	std::lock_guard lock(locality_mutex_);
	locality_memo_[key] = found;
	return found;
}

std::vector<StateVector> FieldEngine::fingerprint(const FieldHandle& h, const ModeWindow& win) const
{
	std::vector<StateVector> fp;
	for (const auto& [n0, n] : win.cells())
		for (const auto& w : win.states)
			fp.push_back(mode(h, n0, n, w));
	return fp;
}

GeneratedSpace FieldEngine::generate(const std::vector<FieldHandle>& U, const GenerateOptions& gopt,
                                     const ModeWindow& win) const
{
	GeneratedSpace out;
	out.depth = gopt.depth;
	std::vector<MultiIndex> ms = gopt.m_values.empty() ? win.m_values() : gopt.m_values;
	auto box = win.m_values();

	std::vector<std::vector<StateVector>> prints;
	std::unordered_map<std::size_t, std::vector<std::size_t>> by_hash;
	auto hash_print = [](const std::vector<StateVector>& fp) {
		std::size_t h = fp.size();
		for (const auto& s : fp)
			for (const auto& [id, c] : s.terms())
				h = (h ^ (id * 0x9e3779b97f4a7c15ULL)) * 0x100000001b3ULL + std::hash<std::string>{}(c.get_str());
		return h;
	};
	auto admit = [&](const FieldHandle& h) {
		auto fp = fingerprint(h, win);
		bool zero = std::all_of(fp.begin(), fp.end(), [](const StateVector& s) { return s.is_zero(); });
		if (zero && h->kind != FieldKind::Identity) {
			out.log.push_back("zero on window: " + h->provenance);
			return false;
		}
		std::size_t key = hash_print(fp);
		for (std::size_t idx : by_hash[key])
			if (prints[idx] == fp) {
				out.log.push_back("duplicate of " + out.fields[idx]->provenance + ": " + h->provenance);
				return false;
			}
		by_hash[key].push_back(prints.size());
		prints.push_back(std::move(fp));
		out.fields.push_back(h);
		out.log.push_back("added: " + h->provenance);
		return true;
	};

	std::vector<FieldHandle> left{identity()};
	left.insert(left.end(), U.begin(), U.end());
	std::vector<FieldHandle> level;
	for (const auto& h : left)
		if (admit(h))
			level.push_back(h);

	for (int d = 1; d <= gopt.depth; ++d) {
		std::vector<FieldHandle> next;
		for (const auto& x : left)
			for (const auto& y : level) {
				if (!locality_order(x, y, win, opt_.locality_bound)) {
					out.locality_failures.push_back(x->provenance + " | " + y->provenance);
					out.log.push_back("not local within bound: " + x->provenance + " , " + y->provenance);
					continue;
				}
				for (int m0 = gopt.m0_lo; m0 <= gopt.m0_hi; ++m0)
					for (const auto& m : ms) {
						if (m0 < win.m0_lo || m0 > win.m0_hi || std::find(box.begin(), box.end(), m) == box.end()) {
							out.log.push_back("skipped (outside window): (" + std::to_string(m0) + "," +
							                  m.to_string() + ")");
							continue;
						}
						FieldHandle h = e_product_unchecked(x, m0, m, y);
						if (admit(h))
							next.push_back(h);
					}
			}
		level = std::move(next);
	}

	out.max_locality = 0;
	for (std::size_t i = 0; i < out.fields.size(); ++i)
		for (std::size_t j = i; j < out.fields.size(); ++j) {
			auto k = locality_order(out.fields[i], out.fields[j], win, opt_.locality_bound);
			if (!k) {
				out.locality_failures.push_back(out.fields[i]->provenance + " | " + out.fields[j]->provenance);
				continue;
			}
			out.max_locality = std::max(out.max_locality, *k);
		}
	return out;
}

CheckOutcome FieldEngine::transfer_check(const FieldHandle& a, const FieldHandle& b, const std::vector<FieldHandle>& c,
                                         const MultiIndex& m, const ModeWindow& win) const
{
	CheckOutcome res;
	const int k = static_cast<int>(c.size()) - 1;
	for (int j = 0; j <= k + 2; ++j) {
		FieldHandle prod = e_product_unchecked(a, j, m, b);
		for (const auto& [n0, n] : win.cells())
			for (std::size_t s = 0; s < win.states.size(); ++s) {
				const auto& w = win.states[s];
				++res.coefficients;
				StateVector lhs = mode(prod, n0, n, w);
				StateVector rhs = j <= k ? mode(c[j], n0, n, w) : StateVector{};
				if (lhs != rhs) {
					res.ok = false;
					res.witness = {{"j", j},
					               {"n0", n0},
					               {"n", n.to_string()},
					               {"state", win.state_labels.at(s)},
					               {"lhs", format_state(lhs, W_.spec())},
					               {"rhs", format_state(rhs, W_.spec())}};
					return res;
				}
			}
	}
	return res;
}

CheckOutcome FieldEngine::equal_on(const FieldHandle& x, const FieldHandle& y, const ModeWindow& win) const
{
	CheckOutcome res;
	for (const auto& [n0, n] : win.cells())
		for (std::size_t s = 0; s < win.states.size(); ++s) {
			const auto& w = win.states[s];
			++res.coefficients;
			StateVector lhs = mode(x, n0, n, w);
			StateVector rhs = mode(y, n0, n, w);
			if (lhs != rhs) {
				res.ok = false;
				res.witness = {{"n0", n0},
				               {"n", n.to_string()},
				               {"state", win.state_labels.at(s)},
				               {"lhs", format_state(lhs, W_.spec())},
				               {"rhs", format_state(rhs, W_.spec())}};
				return res;
			}
		}
	return res;
}

}  // namespace tva
