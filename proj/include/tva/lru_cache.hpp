#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cstddef>
#include <list>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <utility>

namespace tva {

/// Bounded LRU map split into independently locked shards. Values are held
/// by shared_ptr so a hit stays valid after eviction.
template <class Key, class Value, class Hash = std::hash<Key>>
class ShardedLru {
public:
	static constexpr std::size_t kShards = 64;

	explicit ShardedLru(std::size_t capacity = std::size_t{1} << 20) { set_capacity(capacity); }

	void set_capacity(std::size_t capacity)
	{
		per_shard_ = capacity == 0 ? 0 : std::max<std::size_t>(1, capacity / kShards);
		for (auto& s : shards_) {
			std::lock_guard lock(s.mutex);
			s.trim(per_shard_);
		}
	}
	std::size_t capacity() const { return per_shard_ * kShards; }

	std::shared_ptr<const Value> find(const Key& key)
	{
		if (per_shard_ == 0)
			return nullptr;
		std::size_t h = Hash{}(key);
		Shard& s = shards_[shard_of(h)];
		std::lock_guard lock(s.mutex);
		auto it = s.map.find(key);
		if (it == s.map.end()) {
			misses_.fetch_add(1, std::memory_order_relaxed);
			return nullptr;
		}
		s.order.splice(s.order.begin(), s.order, it->second.second);
		hits_.fetch_add(1, std::memory_order_relaxed);
		return it->second.first;
	}

	void insert(const Key& key, std::shared_ptr<const Value> value)
	{
		if (per_shard_ == 0)
			return;
		std::size_t h = Hash{}(key);
		Shard& s = shards_[shard_of(h)];
		std::lock_guard lock(s.mutex);
		auto it = s.map.find(key);
		if (it != s.map.end()) {
			it->second.first = std::move(value);
			s.order.splice(s.order.begin(), s.order, it->second.second);
			return;
		}
		s.order.push_front(key);
		s.map.emplace(key, std::make_pair(std::move(value), s.order.begin()));
		s.trim(per_shard_);
	}

	void clear()
	{
		for (auto& s : shards_) {
			std::lock_guard lock(s.mutex);
			s.map.clear();
			s.order.clear();
		}
	}

	std::size_t size() const
	{
		std::size_t n = 0;
		for (auto& s : shards_) {
			std::lock_guard lock(s.mutex);
			n += s.map.size();
		}
		return n;
	}
	std::size_t hits() const { return hits_.load(); }
	std::size_t misses() const { return misses_.load(); }

private:
	struct Shard {
		mutable std::mutex mutex;
		std::list<Key> order;
		std::unordered_map<Key, std::pair<std::shared_ptr<const Value>, typename std::list<Key>::iterator>, Hash>
		    map;

		void trim(std::size_t cap)
		{
			while (map.size() > cap) {
				map.erase(order.back());
				order.pop_back();
			}
		}
	};

	static std::size_t shard_of(std::size_t h) { return (h ^ (h >> 29)) % kShards; }

	std::array<Shard, kShards> shards_;
	std::size_t per_shard_ = 0;
	std::atomic<std::size_t> hits_{0};
	std::atomic<std::size_t> misses_{0};
};

}  // namespace tva
