#include "tva/config.hpp"

#include "tva/persistent_cache.hpp"
#include "tva/state_io.hpp"

#include <fstream>

namespace tva {

using json = nlohmann::json;

namespace {

std::pair<int, int> parse_range(const json& j, const std::string& what)
{
	if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer())
		throw ConfigError(what + " must be [lo, hi] with integer entries");
	int lo = j[0].get<int>(), hi = j[1].get<int>();
	if (lo > hi)
		throw ConfigError(what + " is empty: lo " + std::to_string(lo) + " > hi " + std::to_string(hi));
	return {lo, hi};
}

template <class T>
T get_or(const json& j, const char* key, T fallback)
{
	if (!j.contains(key) || j[key].is_null())
		return fallback;
	try {
		return j[key].get<T>();
	} catch (const json::exception& e) {
		throw ConfigError(std::string("config key '") + key + "': " + e.what());
	}
}

std::filesystem::path resolve(const std::filesystem::path& base, const json& j, const char* key)
{
	if (!j.contains(key) || j[key].is_null())
		return {};
	if (!j[key].is_string())
		throw ConfigError(std::string("config key '") + key + "' must be a path string");
	std::filesystem::path p = j[key].get<std::string>();
	return p.is_absolute() ? p : base / p;
}

}  // namespace

WindowSpec WindowSpec::from_json(const json& j, int rank)
{
	if (!j.is_object())
		throw ConfigError("window must be an object");
	WindowSpec w;
	if (j.contains("m0"))
		std::tie(w.m0_lo, w.m0_hi) = parse_range(j["m0"], "window.m0");
	if (!j.contains("m"))
		w.m.assign(rank, {-1, 1});
	else if (j["m"].is_array() && !j["m"].empty() && j["m"][0].is_array()) {
		if (static_cast<int>(j["m"].size()) != rank)
			throw ConfigError("window.m has " + std::to_string(j["m"].size()) + " ranges but r = " +
			                  std::to_string(rank));
		for (const auto& r : j["m"])
			w.m.push_back(parse_range(r, "window.m entry"));
	} else
		w.m.assign(rank, parse_range(j["m"], "window.m"));
	if (j.contains("states")) {
		if (!j["states"].is_array())
			throw ConfigError("window.states must be an array of state references");
		for (const auto& s : j["states"]) {
			if (!s.is_string())
				throw ConfigError("window.states entries must be strings");
			w.states.push_back(s.get<std::string>());
		}
	} else
		w.states = {"vac"};
	return w;
}

json WindowSpec::to_json() const
{
	json ms = json::array();
	for (const auto& [lo, hi] : m)
		ms.push_back({lo, hi});
	return {{"m0", {m0_lo, m0_hi}}, {"m", ms}, {"states", states}};
}

std::size_t WindowSpec::cell_count() const
{
	std::size_t n = static_cast<std::size_t>(m0_hi - m0_lo + 1);
	for (const auto& [lo, hi] : m)
		n *= static_cast<std::size_t>(hi - lo + 1);
	return n;
}

ModeWindow materialize(const WindowSpec& spec, const RestrictedModule& W, const std::filesystem::path& base_dir)
{
	ModeWindow win;
	win.m0_lo = spec.m0_lo;
	win.m0_hi = spec.m0_hi;
	win.m = spec.m;
	for (const auto& s : spec.states) {
		try {
			win.states.push_back(parse_state(s, W, base_dir));
		} catch (const ParseError& e) {
			throw ConfigError("window state '" + s + "': " + e.what());
		}
		win.state_labels.push_back(s);
	}
	return win;
}

SessionConfig SessionConfig::from_json(const json& j, const std::filesystem::path& base_dir)
{
	if (!j.is_object())
		throw ConfigError("config must be a JSON object");
	SessionConfig c;
	c.base_dir = base_dir;
	c.lie_spec_path = resolve(base_dir, j, "lie_spec");
	if (c.lie_spec_path.empty())
		throw ConfigError("config key 'lie_spec' is required");
	try {
		c.spec = LieAlgebraSpec::from_file(c.lie_spec_path);
	} catch (const json::parse_error& e) {
		throw ConfigError("Lie algebra file " + c.lie_spec_path.string() + ": " + e.what());
	} catch (const SpecError& e) {
		throw ConfigError(e.what());
	}

	c.rank = get_or(j, "r", 1);
	if (c.rank < 1 || c.rank > kMaxRank)
		throw ConfigError("r must be between 1 and " + std::to_string(kMaxRank) + ", got " + std::to_string(c.rank));
	if (j.contains("level")) {
		try {
			c.level = j["level"].is_number_integer() ? Rational(j["level"].get<long>())
			                                         : parse_rational(j["level"].get<std::string>());
		} catch (const std::exception& e) {
			throw ConfigError(std::string("level must be an integer or a \"p/q\" string: ") + e.what());
		}
	}

	c.window = j.contains("window") ? WindowSpec::from_json(j["window"], c.rank) : WindowSpec::from_json(json::object(), c.rank);
	c.triple_window = j.contains("triple_window") ? WindowSpec::from_json(j["triple_window"], c.rank) : c.window;

	c.locality_bound = get_or(j, "locality_bound", c.locality_bound);
	c.depth = get_or(j, "depth", c.depth);
	c.cap = get_or(j, "cap", c.cap);
	c.seed = get_or<uint64_t>(j, "seed", c.seed);
	c.random_triples = get_or(j, "random_triples", c.random_triples);
	c.toroidal_triples = get_or(j, "toroidal_triples", c.toroidal_triples);
	c.borcherds_samples = get_or(j, "borcherds_samples", c.borcherds_samples);
	c.max_sum_terms = get_or(j, "max_sum_terms", c.max_sum_terms);
	c.budget = get_or(j, "budget", c.budget);
	for (auto [name, v] : {std::pair{"locality_bound", c.locality_bound}, {"depth", c.depth}, {"cap", c.cap},
	                       {"random_triples", c.random_triples}, {"toroidal_triples", c.toroidal_triples},
	                       {"borcherds_samples", c.borcherds_samples}})
		if (v < 0)
			throw ConfigError(std::string(name) + " must be non-negative");
	if (c.max_sum_terms < 1)
		throw ConfigError("max_sum_terms must be positive");

	if (j.contains("cache")) {
		const auto& cj = j["cache"];
		c.cache_entries = get_or<std::size_t>(cj, "entries", c.cache_entries);
		c.cache_path = resolve(base_dir, cj, "path");
	}
	if (j.contains("output")) {
		c.report_path = resolve(base_dir, j["output"], "report");
		c.csv_path = resolve(base_dir, j["output"], "csv");
	}
	if (j.contains("twist"))
		c.twisted = get_or(j["twist"], "enabled", c.twisted);
	if (j.contains("v0")) {
		c.v0 = get_or(j["v0"], "enabled", c.v0);
		c.v0_depth = get_or(j["v0"], "depth", c.v0_depth);
		c.v0_max_degree = get_or(j["v0"], "max_degree", c.v0_max_degree);
	}
	return c;
}

SessionConfig SessionConfig::from_file(const std::filesystem::path& path)
{
	std::ifstream in(path);
	if (!in)
		throw ConfigError("cannot open config '" + path.string() + "'");
	json j;
	try {
		j = json::parse(in);
	} catch (const json::parse_error& e) {
		throw ConfigError("config " + path.string() + ": " + e.what());
	}
	return from_json(j, path.parent_path());
}

json SessionConfig::identity_json() const
{
	return {{"spec", spec.to_json()},
	        {"r", rank},
	        {"level", to_string(level)},
	        {"window", window.to_json()},
	        {"triple_window", triple_window.to_json()},
	        {"cap", cap},
	        {"seed", seed},
	        {"random_triples", random_triples},
	        {"toroidal_triples", toroidal_triples},
	        {"borcherds_samples", borcherds_samples},
	        {"twisted", twisted},
	        {"v0", {v0, v0_depth, v0_max_degree}}};
}

std::string SessionConfig::session_key() const { return content_hash(identity_json().dump()); }

double SessionConfig::estimate_cost() const
{
	const double d = spec.dim();
	const double tc = static_cast<double>(triple_window.cell_count());
	const double ts = std::max<std::size_t>(1, triple_window.states.size());
	const double wc = static_cast<double>(window.cell_count());
	const double ws = std::max<std::size_t>(1, window.states.size());
	double jacobi = d * d * (d + ts + random_triples) * tc * tc * 2 * (cap + 1);
	double module = (d * tc) * (d * tc) * ts / 2;
	double single = d * d * wc * ws * 4;
	return jacobi + module + single;
}

}  // namespace tva
