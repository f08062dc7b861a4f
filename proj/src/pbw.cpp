#include "tva/pbw.hpp"

#include <algorithm>
#include <stdexcept>

namespace tva {

int PBWMonomial::degree() const
{
	int d = tail == kVacuum ? 0 : 1;
	for (const auto& x : word)
		d -= x.t0;
	return d;
}

bool PBWMonomial::is_canonical() const
{
	for (std::size_t i = 0; i < word.size(); ++i) {
		if (word[i].t0 > -1)
			return false;
		if (i + 1 < word.size() && word[i + 1] < word[i])
			return false;
	}
	return true;
}

MultiIndex PBWMonomial::t_degree(int rank) const
{
	MultiIndex out(rank);
	for (const auto& x : word)
		out += x.m;
	return out;
}

std::size_t PBWMonomial::hash() const
{
	std::size_t h = static_cast<std::size_t>(tail + 2) * 0xff51afd7ed558ccdULL;
	for (const auto& x : word)
		h = (h ^ x.hash()) * 0x100000001b3ULL + 0x9e3779b97f4a7c15ULL;
	return h;
}

MonomialTable& MonomialTable::instance()
{
	static MonomialTable table;
	return table;
}

MonomialTable::MonomialTable()
    : chunks_(std::make_unique<std::unique_ptr<PBWMonomial[]>[]>(kMaxChunks)),
      degrees_(std::make_unique<std::unique_ptr<int[]>[]>(kMaxChunks))
{
	insert_locked(PBWMonomial{});
}

MonoId MonomialTable::insert_locked(PBWMonomial&& m)
{
	std::size_t id = count_.load(std::memory_order_relaxed);
	std::size_t chunk = id >> kChunkBits;
	if (chunk >= kMaxChunks)
		throw std::length_error("monomial table exhausted");
	if (!chunks_[chunk]) {
		chunks_[chunk] = std::make_unique<PBWMonomial[]>(kChunkSize);
		degrees_[chunk] = std::make_unique<int[]>(kChunkSize);
	}
	PBWMonomial& slot = chunks_[chunk][id & (kChunkSize - 1)];
	slot = std::move(m);
	degrees_[chunk][id & (kChunkSize - 1)] = slot.degree();
	index_.emplace(&slot, static_cast<MonoId>(id));
	count_.store(id + 1, std::memory_order_release);
	return static_cast<MonoId>(id);
}

MonoId MonomialTable::intern(const PBWMonomial& m)
{
	std::lock_guard lock(mutex_);
	auto it = index_.find(&m);
	if (it != index_.end())
		return it->second;
	return insert_locked(PBWMonomial(m));
}

MonoId MonomialTable::intern(PBWMonomial&& m)
{
	std::lock_guard lock(mutex_);
	auto it = index_.find(&m);
	if (it != index_.end())
		return it->second;
	return insert_locked(std::move(m));
}

StateVector StateVector::basis(MonoId id, Rational c)
{
	StateVector v;
	if (c != 0)
		v.terms_.emplace(id, std::move(c));
	return v;
}

Rational StateVector::coeff(MonoId id) const
{
	auto it = terms_.find(id);
	return it == terms_.end() ? Rational(0) : it->second;
}

void StateVector::add(MonoId id, const Rational& c)
{
	if (c == 0)
		return;
	auto [it, inserted] = terms_.try_emplace(id, c);
	if (!inserted) {
		it->second += c;
		if (it->second == 0)
			terms_.erase(it);
	}
}

void StateVector::add_scaled(const StateVector& o, const Rational& c)
{
	if (c == 0)
		return;
	if (c == 1) {
		for (const auto& [id, v] : o.terms_)
			add(id, v);
		return;
	}
	Rational t;
	for (const auto& [id, v] : o.terms_) {
		t = v * c;
		add(id, t);
	}
}

StateVector& StateVector::operator*=(const Rational& c)
{
	if (c == 0) {
		terms_.clear();
		return *this;
	}
	for (auto& [id, v] : terms_)
		v *= c;
	return *this;
}

std::set<int> StateVector::degrees() const
{
	std::set<int> out;
	auto& table = MonomialTable::instance();
	for (const auto& [id, v] : terms_)
		out.insert(table.degree(id));
	return out;
}

int StateVector::max_degree() const
{
	int d = -1;
	auto& table = MonomialTable::instance();
	for (const auto& [id, v] : terms_)
		d = std::max(d, table.degree(id));
	return d;
}

std::vector<std::pair<const PBWMonomial*, const Rational*>> StateVector::sorted_terms() const
{
	std::vector<std::pair<const PBWMonomial*, const Rational*>> out;
	out.reserve(terms_.size());
	for (const auto& [id, v] : terms_)
		out.push_back({&monomial(id), &v});
	std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
		int da = a.first->degree(), db = b.first->degree();
		if (da != db)
			return da < db;
		return *a.first < *b.first;
	});
	return out;
}

}  // namespace tva
