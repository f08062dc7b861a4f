#pragma once

#include "tva/vertex_ops.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace tva {

class LocalityError : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

enum class FieldKind { Current, Identity, Product, Derivative, Vertex, Linear };

struct FieldNode;
using FieldHandle = std::shared_ptr<const FieldNode>;

/// An element of E(W, r) given by its modes (n0, n, w) -> W. The tree records
/// how the field was built; `weight` bounds the modes: h(n0, n) w = 0 once
/// n0 >= deg w + weight.
struct FieldNode {
	FieldKind kind = FieldKind::Identity;
	uint64_t id = 0;
	int weight = 0;
	std::string provenance;

	int basis = -1;            // Current
	int m0 = 0;                // Product
	MultiIndex m;              // Product
	int direction = 0;         // Derivative
	FieldHandle a, b;          // Product (a_{(m0,m)} b), Derivative (a)
	StateVector state;         // Vertex: Y(state)
	std::vector<std::pair<Rational, FieldHandle>> terms;  // Linear
};

struct FieldOptions {
	int locality_bound = 4;
	/// Hard cap on the number of terms in one mode-product sum.
	int max_sum_terms = 4096;
	std::size_t cache_entries = std::size_t{1} << 20;
};

struct GenerateOptions {
	int depth = 1;
	int m0_lo = -1;
	int m0_hi = 1;
	/// Toroidal indices used for products; defaults to the window's m box.
	std::vector<MultiIndex> m_values;
};

struct GeneratedSpace {
	std::vector<FieldHandle> fields;
	int depth = 0;
	std::vector<std::string> log;
	/// Largest pairwise locality order seen, -1 before verification.
	int max_locality = -1;
	std::vector<std::string> locality_failures;
};

/// Fields on a fixed restricted module W: construction, modes, locality and
/// the (m0, m)-products.
class FieldEngine {
public:
	FieldEngine(const VertexAlgebra& va, const RestrictedModule& W, FieldOptions opt = {});

	const RestrictedModule& module() const { return W_; }
	const VertexAlgebra& algebra() const { return va_; }
	const FieldOptions& options() const { return opt_; }

	FieldHandle current(int a) const;
	FieldHandle identity() const;
	/// Y_W(v; x0, x) for a state v of V(l, 0).
	FieldHandle vertex(const StateVector& v) const;
	FieldHandle linear(std::vector<std::pair<Rational, FieldHandle>> terms) const;
	FieldHandle scaled(const Rational& c, const FieldHandle& h) const { return linear({{c, h}}); }

	/// Coefficient of x0^{-n0-1} x^{-n} in h(x0, x) w.
	StateVector mode(const FieldHandle& h, int n0, const MultiIndex& n, const StateVector& w) const;

	/// Least k <= bound with (x0 - y0)^k [a(x0,x), b(y0,y)] = 0 on the window,
	/// or nullopt. Throws std::invalid_argument on an empty window.
	std::optional<int> locality_order(const FieldHandle& a, const FieldHandle& b, const ModeWindow& win,
	                                  int bound) const;
	/// Whether the order-k coefficient identity holds on the window.
	CheckOutcome locality_at(const FieldHandle& a, const FieldHandle& b, int k, const ModeWindow& win) const;

	/// a_{(m0,m)} b. Throws LocalityError unless a and b are local on win
	/// within the configured bound.
	FieldHandle e_product(const FieldHandle& a, int m0, const MultiIndex& m, const FieldHandle& b,
	                      const ModeWindow& win) const;
	/// The same node without the locality precondition (for oracles and tests).
	FieldHandle e_product_unchecked(const FieldHandle& a, int m0, const MultiIndex& m, const FieldHandle& b) const;

	/// D0 = d/dx0 for i = 0, D_i = x_i d/dx_i for i >= 1. Throws std::out_of_range.
	FieldHandle apply_D(int i, const FieldHandle& a) const;

	/// Left-nested products of U and 1_W up to the given depth, deduplicated by
	/// their mode values on win; every pair of the result is checked for locality.
	GeneratedSpace generate(const std::vector<FieldHandle>& U, const GenerateOptions& gopt, const ModeWindow& win) const;

	/// a_{(j,m)} b = c_j for j <= k and = 0 for j = k+1, k+2, on win.
	CheckOutcome transfer_check(const FieldHandle& a, const FieldHandle& b, const std::vector<FieldHandle>& c,
	                            const MultiIndex& m, const ModeWindow& win) const;

	/// Mode-by-mode equality on win.
	CheckOutcome equal_on(const FieldHandle& x, const FieldHandle& y, const ModeWindow& win) const;

private:
	struct Key {
		uint64_t node;
		int n0;
		MultiIndex n;
		MonoId w;
		friend bool operator==(const Key&, const Key&) = default;
	};
	struct KeyHash {
		std::size_t operator()(const Key& k) const
		{
			return ((k.n.hash() ^ k.node * 0x9e3779b97f4a7c15ULL) * 0x100000001b3ULL ^
			        static_cast<std::size_t>(static_cast<uint32_t>(k.n0))) *
			           0xff51afd7ed558ccdULL +
			       k.w;
		}
	};

	FieldHandle make(FieldNode node) const;
	std::shared_ptr<const StateVector> mode_monomial(const FieldHandle& h, int n0, const MultiIndex& n, MonoId w) const;
	StateVector compute(const FieldHandle& h, int n0, const MultiIndex& n, MonoId w) const;
	std::vector<StateVector> fingerprint(const FieldHandle& h, const ModeWindow& win) const;

	const VertexAlgebra& va_;
	const RestrictedModule& W_;
	FieldOptions opt_;
	mutable ShardedLru<Key, StateVector, KeyHash> cache_;
	mutable std::mutex locality_mutex_;
	mutable std::map<std::tuple<uint64_t, uint64_t, int, std::string>, std::optional<int>> locality_memo_;
};

}  // namespace tva
