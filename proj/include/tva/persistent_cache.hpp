#pragma once

#include "json.hpp"

#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

namespace tva {

/// 64-bit FNV-1a, printed as 16 hex digits.
std::string content_hash(std::string_view text);

/// JSON file of results keyed by content hash, for resumable runs. Entries are
/// only ever added; save() rewrites the file atomically.
class PersistentCache {
public:
	PersistentCache() = default;
	explicit PersistentCache(std::filesystem::path path);

	std::optional<nlohmann::json> get(const std::string& key) const;
	void put(const std::string& key, nlohmann::json value);
	void save() const;
	std::size_t size() const;

	/// Key combining a session hash with a readable description.
	static std::string key(const std::string& session, const std::string& what);

private:
	std::filesystem::path path_;
	mutable std::mutex mutex_;
	nlohmann::json data_ = nlohmann::json::object();
};

}  // namespace tva
