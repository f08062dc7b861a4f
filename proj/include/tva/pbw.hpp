#pragma once

#include "tva/toroidal.hpp"

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <unordered_map>
#include <vector>

namespace tva {

/// Basis element of V(l,0): a canonical word of creation modes followed by a
/// tail, which is either the vacuum (tail = kVacuum) or a basis element of g.
struct PBWMonomial {
	static constexpr int kVacuum = -1;

	std::vector<LoopMode> word;
	int tail = kVacuum;

	int degree() const;
	bool is_canonical() const;
	/// Sum of the t-exponents of the word.
	MultiIndex t_degree(int rank) const;

	friend auto operator<=>(const PBWMonomial&, const PBWMonomial&) = default;
	friend bool operator==(const PBWMonomial&, const PBWMonomial&) = default;

	std::size_t hash() const;
};

using MonoId = uint32_t;

/// Process-wide interning of PBW monomials. Ids are stable for the lifetime
/// of the process; lookups by id are lock free.
class MonomialTable {
public:
	static MonomialTable& instance();

	MonoId intern(const PBWMonomial& m);
	MonoId intern(PBWMonomial&& m);
	const PBWMonomial& get(MonoId id) const
	{
		return chunks_[id >> kChunkBits][id & (kChunkSize - 1)];
	}
	int degree(MonoId id) const { return degrees_[id >> kChunkBits][id & (kChunkSize - 1)]; }
	std::size_t size() const { return count_.load(std::memory_order_acquire); }

	MonoId vacuum() const { return 0; }

private:
	MonomialTable();

	static constexpr int kChunkBits = 14;
	static constexpr std::size_t kChunkSize = std::size_t{1} << kChunkBits;
	static constexpr std::size_t kMaxChunks = std::size_t{1} << 16;

	struct Hash {
		std::size_t operator()(const PBWMonomial* m) const { return m->hash(); }
	};
	struct Eq {
		bool operator()(const PBWMonomial* a, const PBWMonomial* b) const { return *a == *b; }
	};

	MonoId insert_locked(PBWMonomial&& m);

	std::mutex mutex_;
	std::unique_ptr<std::unique_ptr<PBWMonomial[]>[]> chunks_;
	std::unique_ptr<std::unique_ptr<int[]>[]> degrees_;
	std::unordered_map<const PBWMonomial*, MonoId, Hash, Eq> index_;
	std::atomic<std::size_t> count_{0};
};

inline const PBWMonomial& monomial(MonoId id) { return MonomialTable::instance().get(id); }
inline MonoId intern(const PBWMonomial& m) { return MonomialTable::instance().intern(m); }

/// Exact sparse combination of PBW monomials. Zero coefficients are never stored.
class StateVector {
public:
	using Terms = std::map<MonoId, Rational>;

	StateVector() = default;
	static StateVector basis(MonoId id, Rational c = 1);
	static StateVector basis(const PBWMonomial& m, Rational c = 1) { return basis(intern(m), std::move(c)); }
	static StateVector vacuum() { return basis(MonomialTable::instance().vacuum()); }
	static StateVector tail(int b) { return basis(PBWMonomial{{}, b}); }

	const Terms& terms() const { return terms_; }
	bool is_zero() const { return terms_.empty(); }
	std::size_t size() const { return terms_.size(); }
	Rational coeff(MonoId id) const;

	void add(MonoId id, const Rational& c);
	void add_scaled(const StateVector& o, const Rational& c);

	StateVector& operator+=(const StateVector& o)
	{
		add_scaled(o, Rational(1));
		return *this;
	}
	StateVector& operator-=(const StateVector& o)
	{
		add_scaled(o, Rational(-1));
		return *this;
	}
	StateVector& operator*=(const Rational& c);
	friend StateVector operator+(StateVector a, const StateVector& b) { return a += b; }
	friend StateVector operator-(StateVector a, const StateVector& b) { return a -= b; }
	friend StateVector operator*(const Rational& c, StateVector a) { return a *= c; }
	friend bool operator==(const StateVector&, const StateVector&) = default;

	/// Set of degrees of the monomials present.
	std::set<int> degrees() const;
	/// Largest degree present, or -1 for the zero vector.
	int max_degree() const;

	/// Terms in canonical monomial order (for deterministic output).
	std::vector<std::pair<const PBWMonomial*, const Rational*>> sorted_terms() const;

private:
	Terms terms_;
};

}  // namespace tva
