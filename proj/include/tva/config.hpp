#pragma once

#include "tva/lie_algebra.hpp"
#include "tva/vacuum_module.hpp"
#include "tva/window.hpp"

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tva {

class ConfigError : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

/// Index box plus state references, before a module exists to parse them.
struct WindowSpec {
	int m0_lo = -2;
	int m0_hi = 2;
	std::vector<std::pair<int, int>> m;
	std::vector<std::string> states;

	/// {"m0": [lo, hi], "m": [lo, hi] | [[lo, hi], ...], "states": [...]}
	static WindowSpec from_json(const nlohmann::json& j, int rank);
	nlohmann::json to_json() const;
	std::size_t cell_count() const;
};

/// Parses the state references through W.
ModeWindow materialize(const WindowSpec& spec, const RestrictedModule& W, const std::filesystem::path& base_dir);

struct SessionConfig {
	std::filesystem::path base_dir;
	std::filesystem::path lie_spec_path;
	LieAlgebraSpec spec;
	int rank = 1;
	Rational level = 1;

	WindowSpec window;
	WindowSpec triple_window;
	int locality_bound = 4;
	int depth = 2;
	int cap = 8;
	uint64_t seed = 1;
	int random_triples = 20;
	int toroidal_triples = 100;
	int borcherds_samples = 10;
	int max_sum_terms = 4096;
	double budget = 5e7;

	std::size_t cache_entries = std::size_t{1} << 20;
	std::filesystem::path cache_path;
	std::filesystem::path report_path;
	std::filesystem::path csv_path;

	bool twisted = true;
	bool v0 = true;
	int v0_depth = 3;
	int v0_max_degree = 3;

	/// Validates every field and loads the Lie algebra file (relative paths
	/// resolve against base_dir). Throws ConfigError.
	static SessionConfig from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
	static SessionConfig from_file(const std::filesystem::path& path);

	/// Everything that affects mathematical content, for cache keys.
	nlohmann::json identity_json() const;
	std::string session_key() const;

	/// Rough count of mode evaluations an axioms run will need.
	double estimate_cost() const;
};

}  // namespace tva
