#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>

namespace tva {

/// Largest number of toroidal directions r supported by a session.
inline constexpr int kMaxRank = 4;

/// An element m of Z^r. Unused trailing slots stay zero so that the
/// defaulted comparison is lexicographic on the first r entries.
class MultiIndex {
public:
	MultiIndex() = default;
	explicit MultiIndex(int rank) : rank_(check_rank(rank)) {}
	MultiIndex(std::initializer_list<int> values) : rank_(check_rank(static_cast<int>(values.size())))
	{
		int i = 0;
		for (int v : values)
			v_[i++] = v;
	}
	static MultiIndex from(std::span<const int> values)
	{
		MultiIndex out(static_cast<int>(values.size()));
		for (std::size_t i = 0; i < values.size(); ++i)
			out.v_[i] = values[i];
		return out;
	}
	static MultiIndex unit(int rank, int direction)
	{
		MultiIndex out(rank);
		out.v_.at(direction) = 1;
		return out;
	}

	int rank() const { return rank_; }
	int operator[](int i) const { return v_[i]; }
	int& operator[](int i) { return v_[i]; }

	bool is_zero() const
	{
		for (int i = 0; i < rank_; ++i)
			if (v_[i] != 0)
				return false;
		return true;
	}

	MultiIndex operator-() const
	{
		MultiIndex out(rank_);
		for (int i = 0; i < rank_; ++i)
			out.v_[i] = -v_[i];
		return out;
	}
	MultiIndex& operator+=(const MultiIndex& o)
	{
		check_same(o);
		for (int i = 0; i < rank_; ++i)
			v_[i] += o.v_[i];
		return *this;
	}
	MultiIndex& operator-=(const MultiIndex& o)
	{
		check_same(o);
		for (int i = 0; i < rank_; ++i)
			v_[i] -= o.v_[i];
		return *this;
	}
	friend MultiIndex operator+(MultiIndex a, const MultiIndex& b) { return a += b; }
	friend MultiIndex operator-(MultiIndex a, const MultiIndex& b) { return a -= b; }

	friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
	friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;

	std::size_t hash() const
	{
		std::size_t h = static_cast<std::size_t>(rank_) * 0x9e3779b97f4a7c15ULL;
		for (int i = 0; i < rank_; ++i)
			h = (h ^ static_cast<std::size_t>(static_cast<uint32_t>(v_[i]))) * 0x100000001b3ULL;
		return h;
	}

	/// "a,b,c" (no brackets).
	std::string to_string() const
	{
		std::string s;
		for (int i = 0; i < rank_; ++i) {
			if (i)
				s += ',';
			s += std::to_string(v_[i]);
		}
		return s;
	}

private:
	static int check_rank(int rank)
	{
		if (rank < 0 || rank > kMaxRank)
			throw std::invalid_argument("rank must lie in [0, " + std::to_string(kMaxRank) + "]");
		return rank;
	}
	void check_same(const MultiIndex& o) const
	{
		if (o.rank_ != rank_)
			throw std::invalid_argument("multi-index rank mismatch");
	}

	std::array<int32_t, kMaxRank> v_{};
	int32_t rank_ = 0;
};

}  // namespace tva
