#include "tva/axioms.hpp"
#include "tva/config.hpp"
#include "tva/field.hpp"
#include "tva/persistent_cache.hpp"
#include "tva/state_io.hpp"
#include "tva/vertex_ops.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

using namespace tva;
using json = nlohmann::json;

namespace {

enum Exit { kPass = 0, kMathFailure = 1, kUsage = 2, kBudget = 3, kCapExceeded = 4 };

struct Globals {
	std::string config;
	std::string lie;
	std::optional<int> rank;
	std::string level;
	int jobs = 1;
	std::string cache;
	double budget = -1;
	bool mutate = false;
	bool json_out = false;
	bool window = false;
	std::string report;
	std::string csv;
};

struct Session {
	SessionConfig cfg;
	std::unique_ptr<VacuumModule> V;
	std::unique_ptr<VertexAlgebra> va;
	ModeWindow win;
	ModeWindow twin;
};

SessionConfig load_config(const Globals& g)
{
	SessionConfig cfg;
	if (!g.config.empty())
		cfg = SessionConfig::from_file(g.config);
	else if (!g.lie.empty()) {
		json j = {{"lie_spec", g.lie}};
		cfg = SessionConfig::from_json(j, std::filesystem::current_path());
	} else
		throw ConfigError("either --config or --lie is required");
	if (!g.lie.empty() && !g.config.empty()) {
		cfg.lie_spec_path = g.lie;
		cfg.spec = LieAlgebraSpec::from_file(g.lie);
	}
	if (g.rank) {
		int r = *g.rank;
		if (r < 1 || r > kMaxRank)
			throw ConfigError("--rank must be between 1 and " + std::to_string(kMaxRank));
		if (r != cfg.rank) {
			cfg.rank = r;
			cfg.window.m.assign(r, cfg.window.m.front());
			cfg.triple_window.m.assign(r, cfg.triple_window.m.front());
		}
	}
	if (!g.level.empty()) {
		try {
			cfg.level = parse_rational(g.level);
		} catch (const std::exception& e) {
			throw ConfigError("--level: " + std::string(e.what()));
		}
	}
	if (!g.cache.empty())
		cfg.cache_path = g.cache;
	if (g.budget >= 0)
		cfg.budget = g.budget;
	if (!g.report.empty())
		cfg.report_path = g.report;
	if (!g.csv.empty())
		cfg.csv_path = g.csv;
	return cfg;
}

Session open_session(const Globals& g)
{
	Session s;
	s.cfg = load_config(g);
	s.V = std::make_unique<VacuumModule>(s.cfg.spec, s.cfg.rank, s.cfg.level, s.cfg.cache_entries);
	s.va = std::make_unique<VertexAlgebra>(*s.V, s.cfg.cache_entries * 2);
	s.win = materialize(s.cfg.window, *s.V, s.cfg.base_dir);
	s.twin = materialize(s.cfg.triple_window, *s.V, s.cfg.base_dir);
	return s;
}

std::string csv_escape(const std::string& s)
{
	std::string out = "\"";
	for (char c : s) {
		if (c == '"')
			out += '"';
		out += c;
	}
	return out + "\"";
}

std::string findings_csv(const json& findings)
{
	std::ostringstream out;
	out << "identity,subject,status,wall_ms,witness\n";
	for (const auto& f : findings)
		out << csv_escape(f.value("identity", "")) << "," << csv_escape(f.value("subject", "")) << ","
		    << f.value("status", "") << "," << f.value("wall_ms", 0.0) << ","
		    << csv_escape(f.contains("witness") ? f["witness"].dump() : "") << "\n";
	return out.str();
}

void write_file(const std::filesystem::path& path, const std::string& text)
{
	std::ofstream out(path);
	if (!out)
		throw ConfigError("cannot write " + path.string());
	out << text;
}

MultiIndex parse_m(const std::string& text, int rank)
{
	try {
		return parse_multi_index(text, rank);
	} catch (const ParseError& e) {
		throw ConfigError(e.what());
	}
}

int parse_int_arg(const std::string& text, const char* what)
{
	try {
		std::size_t pos = 0;
		int v = std::stoi(text, &pos);
		if (pos != text.size())
			throw std::invalid_argument(text);
		return v;
	} catch (const std::exception&) {
		throw ConfigError(std::string(what) + ": expected an integer, got '" + text + "'");
	}
}

void print_state(const Globals& g, const Session& s, const StateVector& v)
{
	if (g.json_out)
		std::cout << state_to_json(v, s.cfg.spec).dump() << "\n";
	else
		std::cout << format_state(v, s.cfg.spec) << "\n";
}

/// Mode table of a computation over the session window.
template <class F>
void print_table(const Globals& g, const Session& s, const std::vector<StateVector>& targets,
                 const std::vector<std::string>& labels, F&& value)
{
	json rows = json::array();
	for (const auto& [n0, n] : s.win.cells())
		for (std::size_t i = 0; i < targets.size(); ++i) {
			StateVector r = value(n0, n, targets[i]);
			if (g.json_out)
				rows.push_back({{"n0", n0}, {"n", n.to_string()}, {"state", labels[i]},
				                {"value", state_to_json(r, s.cfg.spec)}});
			else if (!r.is_zero())
				std::cout << "(" << n0 << "," << n.to_string() << ") " << labels[i] << " -> "
				          << format_state(r, s.cfg.spec) << "\n";
		}
	if (g.json_out)
		std::cout << rows.dump(1) << "\n";
}

int cmd_validate(const Globals& g)
{
	SessionConfig cfg = load_config(g);
	Finding f = check_lie_spec(cfg.spec);
	Finding t = check_toroidal_jacobi(cfg.spec, cfg.rank, cfg.toroidal_triples, 3, cfg.seed);
	if (g.json_out)
		std::cout << json::array({f.to_json(), t.to_json()}).dump(1) << "\n";
	else
		for (const auto& x : {f, t})
			std::cout << (x.passed() ? "PASS " : "FAIL ") << x.identity << " " << x.subject
			          << (x.passed() ? "" : " " + x.witness.dump()) << "\n";
	return f.passed() && t.passed() ? kPass : kMathFailure;
}

int cmd_act(const Globals& g, const std::vector<std::string>& a)
{
	Session s = open_session(g);
	const auto& spec = s.cfg.spec;
	if (a.size() == 2 && a[0] == "k") {
		print_state(g, s, s.V->level() * parse_state(a[1], *s.V, s.cfg.base_dir));
		return kPass;
	}
	if (a.size() == 2 && a[0] == "d0") {
		print_state(g, s, s.V->d0(parse_state(a[1], *s.V, s.cfg.base_dir)));
		return kPass;
	}
	if (a.size() != 4)
		throw ConfigError("act expects BASIS N0 N STATE (or k STATE, d0 STATE)");
	int b = spec.index_of(a[0]);
	if (b < 0)
		throw ConfigError("unknown basis element '" + a[0] + "'");
	LoopMode x{b, parse_int_arg(a[1], "n0"), parse_m(a[2], s.cfg.rank)};
	print_state(g, s, s.V->act(x, parse_state(a[3], *s.V, s.cfg.base_dir)));
	return kPass;
}

int cmd_product(const Globals& g, const std::vector<std::string>& a)
{
	Session s = open_session(g);
	if (g.window) {
		if (a.empty())
			throw ConfigError("product --window expects U [W]");
		StateVector u = parse_state(a[0], *s.V, s.cfg.base_dir);
		std::vector<StateVector> targets = s.win.states;
		std::vector<std::string> labels = s.win.state_labels;
		if (a.size() >= 2) {
			targets = {parse_state(a.back(), *s.V, s.cfg.base_dir)};
			labels = {a.back()};
		}
		print_table(g, s, targets, labels,
		            [&](int n0, const MultiIndex& n, const StateVector& w) { return s.va->product(u, n0, n, w); });
		return kPass;
	}
	if (a.size() != 4)
		throw ConfigError("product expects U M0 M V");
	StateVector u = parse_state(a[0], *s.V, s.cfg.base_dir);
	StateVector v = parse_state(a[3], *s.V, s.cfg.base_dir);
	print_state(g, s, s.va->product(u, parse_int_arg(a[1], "m0"), parse_m(a[2], s.cfg.rank), v));
	return kPass;
}

int cmd_field(const Globals& g, const std::vector<std::string>& a)
{
	Session s = open_session(g);
	FieldOptions fo;
	fo.locality_bound = s.cfg.locality_bound;
	fo.max_sum_terms = s.cfg.max_sum_terms;
	FieldEngine fe(*s.va, *s.V, fo);
	FieldHandle h;
	if (a.size() == 1)
		h = fe.vertex(parse_state(a[0], *s.V, s.cfg.base_dir));
	else if (a.size() == 4)
		h = fe.e_product(fe.vertex(parse_state(a[0], *s.V, s.cfg.base_dir)), parse_int_arg(a[1], "m0"),
		                 parse_m(a[2], s.cfg.rank), fe.vertex(parse_state(a[3], *s.V, s.cfg.base_dir)), s.twin);
	else
		throw ConfigError("field expects U, or U M0 M V for the product field");
	if (!g.json_out)
		std::cout << "# " << h->provenance << "\n";
	print_table(g, s, s.win.states, s.win.state_labels,
	            [&](int n0, const MultiIndex& n, const StateVector& w) { return fe.mode(h, n0, n, w); });
	return kPass;
}

int cmd_locality(const Globals& g, const std::vector<std::string>& a)
{
	if (a.size() != 2)
		throw ConfigError("locality expects U V");
	Session s = open_session(g);
	FieldEngine fe(*s.va, *s.V);
	auto k = fe.locality_order(fe.vertex(parse_state(a[0], *s.V, s.cfg.base_dir)),
	                           fe.vertex(parse_state(a[1], *s.V, s.cfg.base_dir)), s.win, s.cfg.locality_bound);
	if (g.json_out)
		std::cout << json{{"u", a[0]}, {"v", a[1]}, {"order", k ? json(*k) : json(nullptr)},
		                  {"bound", s.cfg.locality_bound}}
		                 .dump()
		          << "\n";
	else if (k)
		std::cout << "locality order " << *k << "\n";
	else
		std::cout << "not local within bound " << s.cfg.locality_bound << "\n";
	return k ? kPass : kMathFailure;
}

SuiteOptions suite_options(const Globals& g, const Session& s)
{
	SuiteOptions opt;
	opt.window = s.win;
	opt.triple_window = s.twin;
	for (int a = 0; a < s.cfg.spec.dim(); ++a) {
		opt.generators.push_back(StateVector::tail(a));
		opt.generator_labels.push_back(s.cfg.spec.name(a));
	}
	opt.cap = s.cfg.cap;
	opt.random_triples = s.cfg.random_triples;
	opt.toroidal_triples = s.cfg.toroidal_triples;
	opt.borcherds_samples = s.cfg.borcherds_samples;
	opt.seed = s.cfg.seed;
	opt.jobs = g.jobs;
	opt.twisted = s.cfg.twisted;
	opt.v0 = s.cfg.v0;
	opt.v0_depth = s.cfg.v0_depth;
	opt.v0_max_degree = s.cfg.v0_max_degree;
	opt.session_key = s.cfg.session_key();
	return opt;
}

void emit_report(const Globals& g, const Session& s, const json& findings, const json& summary)
{
	json report = {{"session", s.cfg.identity_json()}, {"summary", summary}, {"findings", findings}};
	if (!s.cfg.report_path.empty())
		write_file(s.cfg.report_path, report.dump(1) + "\n");
	if (!s.cfg.csv_path.empty())
		write_file(s.cfg.csv_path, findings_csv(findings));
	if (g.json_out)
		std::cout << report.dump(1) << "\n";
}

int cmd_axioms(const Globals& g)
{
	Session s = open_session(g);
	double cost = s.cfg.estimate_cost();
	if (cost > s.cfg.budget) {
		std::cerr << "refused: estimated " << cost << " mode evaluations exceeds budget " << s.cfg.budget << "\n";
		return kBudget;
	}
	SuiteOptions opt = suite_options(g, s);

	if (g.mutate) {
		auto results = run_mutations(s.cfg.spec, s.cfg.rank, s.cfg.level, opt);
		json findings = json::array();
		bool all = true;
		for (const auto& r : results) {
			all = all && r.detected;
			findings.push_back({{"identity", "mutation"},
			                    {"paper_ref", identity_reference("mutation")},
			                    {"subject", r.label},
			                    {"status", r.detected ? "pass" : "fail"},
			                    {"witness", {{"caught_by", r.caught_by}}}});
			if (!g.json_out)
				std::cout << (r.detected ? "DETECTED " : "MISSED   ") << r.label << "  ["
				          << (r.caught_by.empty() ? std::string("-") : r.caught_by.front()) << "]\n";
		}
		emit_report(g, s, findings, {{"mutations", results.size()}, {"all_detected", all}});
		return all ? kPass : kMathFailure;
	}

	std::unique_ptr<PersistentCache> cache;
	if (!s.cfg.cache_path.empty()) {
		cache = std::make_unique<PersistentCache>(s.cfg.cache_path);
		opt.cache = cache.get();
	}
	SuiteReport rep = run_suite(*s.V, *s.va, opt);
	if (cache)
		cache->save();
	std::size_t passed = 0;
	for (const auto& f : rep.findings) {
		passed += f.passed();
		if (!g.json_out)
			std::cout << (f.status == "pass" ? "PASS " : f.status == "info" ? "INFO " : "FAIL ") << f.identity << " "
			          << f.subject << (f.passed() ? "" : "  " + f.status + " " + f.witness.dump()) << "\n";
	}
	json summary = {{"findings", rep.findings.size()}, {"passed", passed}, {"all_passed", rep.all_passed()},
	                {"cap_exceeded", rep.cap_exceeded()}};
	if (!g.json_out)
		std::cout << passed << "/" << rep.findings.size() << " passed\n";
	emit_report(g, s, rep.to_json(), summary);
	if (rep.all_passed())
		return kPass;
	for (const auto& f : rep.findings)
		if (f.status != "cap-exceeded" && !f.passed())
			return kMathFailure;
	return kCapExceeded;
}

int cmd_v0(const Globals& g)
{
	Session s = open_session(g);
	const auto& spec = s.cfg.spec;
	V0Options vo;
	vo.depth = s.cfg.v0_depth;
	vo.max_degree = s.cfg.v0_max_degree;
	vo.min_m0 = -s.cfg.v0_max_degree;
	vo.box = s.twin.m_values();
	V0Subspace sub = build_V0(*s.va, vo);

	json out;
	json dims = json::object();
	for (const auto& [d, n] : sub.box_dims)
		dims[std::to_string(d)] = {{"box", n}, {"expected", sub.expected_box_dims[d]}, {"span", sub.graded_dims[d]}};
	out["dimensions"] = dims;
	out["tails_absent"] = sub.tails_absent;
	out["contains_vacuum"] = sub.contains_vacuum;
	bool ok = sub.box_dims == sub.expected_box_dims && sub.tails_absent && sub.contains_vacuum;
	if (vo.depth == 1) {
		json basis = json::array();
		for (std::size_t i = 0; i < sub.spanning.size(); ++i)
			basis.push_back(format_state(sub.spanning[i], spec));
		out["basis"] = basis;
	}

	json checks = json::array();
	auto record = [&](const std::string& what, const CheckOutcome& r) {
		ok = ok && r.ok;
		checks.push_back({{"check", what}, {"ok", r.ok}, {"witness", r.witness}});
	};
	for (int a = 0; a < spec.dim(); ++a)
		for (int b = 0; b < spec.dim(); ++b)
			record("affine " + spec.name(a) + "," + spec.name(b), s.va->v0_affine_commutator(a, b, s.twin, *s.V));
	for (int a = 0; a < spec.dim(); ++a) {
		record("reconstruction " + spec.name(a), s.va->reconstruction(StateVector::tail(a), s.twin, *s.V));
		for (const auto& m : s.twin.m_values()) {
			StateVector u = StateVector::basis(PBWMonomial{{LoopMode{a, -1, m}}, PBWMonomial::kVacuum});
			record("d0 " + format_state(u, spec), s.va->d0_check(u));
		}
	}
	out["checks"] = checks;
	out["ok"] = ok;

	if (g.json_out)
		std::cout << out.dump(1) << "\n";
	else {
		for (const auto& [d, n] : sub.box_dims)
			std::cout << "degree " << d << ": " << n << " (expected " << sub.expected_box_dims[d] << ", span "
			          << sub.graded_dims[d] << ")\n";
		std::cout << "tails absent: " << (sub.tails_absent ? "yes" : "no") << "\n";
		if (out.contains("basis"))
			for (const auto& b : out["basis"])
				std::cout << "  " << b.get<std::string>() << "\n";
		for (const auto& c : checks)
			std::cout << (c["ok"].get<bool>() ? "PASS " : "FAIL ") << c["check"].get<std::string>() << "\n";
	}
	if (!s.cfg.report_path.empty())
		write_file(s.cfg.report_path, out.dump(1) + "\n");
	return ok ? kPass : kMathFailure;
}

int cmd_report(const Globals& g, const std::string& in)
{
	std::ifstream f(in);
	if (!f)
		throw ConfigError("cannot open report '" + in + "'");
	json j;
	try {
		j = json::parse(f);
	} catch (const json::parse_error& e) {
		throw ConfigError("report " + in + ": " + e.what());
	}
	const json& findings = j.is_array() ? j : j.at("findings");
	std::string csv = findings_csv(findings);
	if (!g.csv.empty())
		write_file(g.csv, csv);
	else
		std::cout << csv;
	for (const auto& x : findings)
		if (x.value("status", "") != "pass" && x.value("status", "") != "info")
			return kMathFailure;
	return kPass;
}

}  // namespace

int main(int argc, char** argv)
{
	CLI::App app{"Toroidal vertex algebras of affine type: exact computations and identity checks"};
	app.require_subcommand(1);
	Globals g;
	app.add_option("--config", g.config, "session config (JSON)");
	app.add_option("--lie", g.lie, "Lie algebra file, overriding the config");
	app.add_option("--rank,-r", g.rank, "number of loop variables r");
	app.add_option("--level,-l", g.level, "level as p/q");
	app.add_option("--jobs,-j", g.jobs, "worker threads")->check(CLI::PositiveNumber);
	app.add_option("--cache", g.cache, "persistent result cache file");
	app.add_option("--budget", g.budget, "refuse axioms runs estimated above this many mode evaluations");
	app.add_flag("--mutate", g.mutate, "axioms: run the mutation sweep instead of the suite");
	app.add_flag("--json", g.json_out, "print JSON instead of text");
	app.add_flag("--window", g.window, "product: print the mode table over the config window");
	app.add_option("--report", g.report, "write the JSON report here");
	app.add_option("--csv", g.csv, "write a CSV summary here");

	std::vector<std::string> args;
	std::string report_in;
	auto* validate = app.add_subcommand("validate", "check the Lie algebra file and the toroidal bracket");
	auto* act = app.add_subcommand("act", "apply a loop mode: act BASIS N0 N STATE");
	act->add_option("args", args)->expected(2, 4);
	auto* product = app.add_subcommand("product", "u_(m0,m) v in V(l,0): product U M0 M V");
	product->add_option("args", args)->expected(1, 4);
	auto* field = app.add_subcommand("field", "mode table of Y(U) or of Y(U)_(m0,m) Y(V)");
	field->add_option("args", args)->expected(1, 4);
	auto* locality = app.add_subcommand("locality", "locality order of Y(U), Y(V)");
	locality->add_option("args", args)->expected(2);
	auto* axioms = app.add_subcommand("axioms", "run the identity suite");
	auto* v0 = app.add_subcommand("v0", "build the vacuum ideal and compare with the affine vacuum module");
	auto* report = app.add_subcommand("report", "convert a JSON report to CSV");
	report->add_option("input", report_in)->required();
	for (auto* sub : {validate, act, product, field, locality, axioms, v0, report})
		sub->fallthrough();

	try {
		app.parse(argc, argv);
	} catch (const CLI::ParseError& e) {
		int rc = app.exit(e);
		return rc == 0 ? 0 : kUsage;
	}

	try {
		if (*validate)
			return cmd_validate(g);
		if (*act)
			return cmd_act(g, args);
		if (*product)
			return cmd_product(g, args);
		if (*field)
			return cmd_field(g, args);
		if (*locality)
			return cmd_locality(g, args);
		if (*axioms)
			return cmd_axioms(g);
		if (*v0)
			return cmd_v0(g);
		if (*report)
			return cmd_report(g, report_in);
	} catch (const ConfigError& e) {
		std::cerr << "error: " << e.what() << "\n";
		return kUsage;
	} catch (const ParseError& e) {
		std::cerr << "error: " << e.what() << "\n";
		return kUsage;
	} catch (const SpecError& e) {
		std::cerr << "error: " << e.what() << "\n";
		return kUsage;
	} catch (const nlohmann::json::parse_error& e) {
		std::cerr << "error: " << e.what() << "\n";
		return kUsage;
	} catch (const FinitenessError& e) {
		std::cerr << "finiteness violation: " << e.what() << "\n";
		return kMathFailure;
	} catch (const LocalityError& e) {
		std::cerr << "not local: " << e.what() << "\n";
		return kMathFailure;
	} catch (const std::exception& e) {
		std::cerr << "error: " << e.what() << "\n";
		return kMathFailure;
	}
	return kUsage;
}
