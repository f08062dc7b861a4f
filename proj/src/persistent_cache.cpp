#include "tva/persistent_cache.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace tva {

std::string content_hash(std::string_view text)
{
	uint64_t h = 0xcbf29ce484222325ULL;
	for (unsigned char c : text) {
		h ^= c;
		h *= 0x100000001b3ULL;
	}
	char buf[17];
	std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
	return buf;
}

PersistentCache::PersistentCache(std::filesystem::path path) : path_(std::move(path))
{
	std::ifstream in(path_);
	if (!in)
		return;
	try {
		data_ = nlohmann::json::parse(in);
	} catch (const nlohmann::json::parse_error& e) {
		throw std::runtime_error("cache file " + path_.string() + " is corrupt: " + e.what());
	}
	if (!data_.is_object())
		throw std::runtime_error("cache file " + path_.string() + " is not a JSON object");
}

std::optional<nlohmann::json> PersistentCache::get(const std::string& key) const
{
	std::lock_guard lock(mutex_);
	auto it = data_.find(key);
	if (it == data_.end())
		return std::nullopt;
	return *it;
}

void PersistentCache::put(const std::string& key, nlohmann::json value)
{
	std::lock_guard lock(mutex_);
	data_[key] = std::move(value);
}

std::size_t PersistentCache::size() const
{
	std::lock_guard lock(mutex_);
	return data_.size();
}

void PersistentCache::save() const
{
	if (path_.empty())
		return;
	std::lock_guard lock(mutex_);
	auto tmp = path_;
	tmp += ".tmp";
	{
		std::ofstream out(tmp);
		if (!out)
			throw std::runtime_error("cannot write cache file " + tmp.string());
		out << data_.dump(1) << "\n";
	}
	std::filesystem::rename(tmp, path_);
}

std::string PersistentCache::key(const std::string& session, const std::string& what)
{
	return session + ":" + content_hash(what) + ":" + what.substr(0, 96);
}

}  // namespace tva
