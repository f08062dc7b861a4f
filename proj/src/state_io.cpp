#include "tva/state_io.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace tva {

namespace {

std::string_view trim(std::string_view s)
{
	while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
		s.remove_prefix(1);
	while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
		s.remove_suffix(1);
	return s;
}

int parse_int(std::string_view s, std::string_view context)
{
	s = trim(s);
	std::size_t pos = 0;
	int v = 0;
	try {
		v = std::stoi(std::string(s), &pos);
	} catch (const std::exception&) {
		throw ParseError("expected an integer in '" + std::string(context) + "'");
	}
	if (pos != s.size())
		throw ParseError("expected an integer in '" + std::string(context) + "'");
	return v;
}

int tail_index(std::string_view name, const LieAlgebraSpec& spec)
{
	name = trim(name);
	if (name == "1" || name == "vac")
		return PBWMonomial::kVacuum;
	try {
		return spec.index_of(name);
	} catch (const SpecError&) {
		throw ParseError("unknown basis element '" + std::string(name) + "'");
	}
}

/// Splits at '+' outside parentheses; a '+' right after '*', '(' or ',' is a sign.
std::vector<std::string_view> split_terms(std::string_view s)
{
	std::vector<std::string_view> out;
	int depth = 0;
	std::size_t start = 0;
	for (std::size_t i = 0; i < s.size(); ++i) {
		char c = s[i];
		if (c == '(')
			++depth;
		else if (c == ')')
			--depth;
		else if (c == '+' && depth == 0) {
			std::string_view before = trim(s.substr(start, i - start));
			if (before.empty() || before.back() == '*')
				continue;
			out.push_back(before);
			start = i + 1;
		}
	}
	out.push_back(trim(s.substr(start)));
	return out;
}

StateVector parse_term(std::string_view term, const RestrictedModule& module)
{
	const auto& spec = module.spec();
	Rational coeff = 1;
	if (auto star = term.find('*'); star != std::string_view::npos) {
		try {
			coeff = parse_rational(term.substr(0, star));
		} catch (const std::invalid_argument& e) {
			throw ParseError(e.what());
		}
		term = trim(term.substr(star + 1));
	}
	if (term.empty())
		throw ParseError("empty state term");

	std::string_view word = term;
	int tail = PBWMonomial::kVacuum;
	if (auto bar = term.find('|'); bar != std::string_view::npos) {
		word = trim(term.substr(0, bar));
		tail = tail_index(term.substr(bar + 1), spec);
	} else if (term.find('(') == std::string_view::npos) {
		word = {};
		tail = tail_index(term, spec);
	}

	std::vector<LoopMode> modes;
	std::size_t i = 0;
	while (i < word.size()) {
		if (std::isspace(static_cast<unsigned char>(word[i]))) {
			++i;
			continue;
		}
		auto open = word.find('(', i);
		auto close = word.find(')', i);
		if (open == std::string_view::npos || close == std::string_view::npos || close < open)
			throw ParseError("malformed mode in '" + std::string(term) + "'");
		std::string_view name = trim(word.substr(i, open - i));
		std::string_view inside = word.substr(open + 1, close - open - 1);
		auto comma = inside.find(',');
		if (comma == std::string_view::npos)
			throw ParseError("mode needs (n0,m) in '" + std::string(term) + "'");
		int b = tail_index(name, spec);
		if (b == PBWMonomial::kVacuum)
			throw ParseError("'" + std::string(name) + "' is not a basis element of g");
		modes.push_back(LoopMode{b, parse_int(inside.substr(0, comma), term),
		                         parse_multi_index(inside.substr(comma + 1), module.rank())});
		i = close + 1;
	}

	StateVector v = StateVector::basis(PBWMonomial{{}, tail});
	for (auto it = modes.rbegin(); it != modes.rend(); ++it)
		v = module.act(*it, v);
	v *= coeff;
	return v;
}

}  // namespace

MultiIndex parse_multi_index(std::string_view text, int rank)
{
	text = trim(text);
	if (!text.empty() && text.front() == '(' && text.back() == ')')
		text = text.substr(1, text.size() - 2);
	std::vector<int> values;
	std::size_t start = 0;
	while (true) {
		auto comma = text.find(',', start);
		values.push_back(parse_int(text.substr(start, comma - start), text));
		if (comma == std::string_view::npos)
			break;
		start = comma + 1;
	}
	if (static_cast<int>(values.size()) != rank)
		throw ParseError("multi-index '" + std::string(text) + "' needs " + std::to_string(rank) + " entries");
	return MultiIndex::from(values);
}

StateVector parse_state(std::string_view text, const RestrictedModule& module, const std::filesystem::path& base_dir)
{
	text = trim(text);
	if (text.empty())
		throw ParseError("empty state reference");
	if (text.front() == '@') {
		std::filesystem::path p(std::string(text.substr(1)));
		if (p.is_relative() && !base_dir.empty())
			p = base_dir / p;
		std::ifstream in(p);
		if (!in)
			throw ParseError("cannot open state file '" + p.string() + "'");
		nlohmann::json j;
		try {
			j = nlohmann::json::parse(in);
		} catch (const nlohmann::json::parse_error& e) {
			throw ParseError(p.string() + ": " + e.what());
		}
		return state_from_json(j, module.spec(), module.rank());
	}
	if (text == "0")
		return {};
	StateVector out;
	for (auto term : split_terms(text))
		out += parse_term(term, module);
	return out;
}

std::string format_monomial(const PBWMonomial& m, const LieAlgebraSpec& spec)
{
	std::string s = "|";
	for (const auto& x : m.word)
		s += mode_to_string(spec, x) + " ";
	s += m.tail == PBWMonomial::kVacuum ? "1" : spec.name(m.tail);
	return s + "⟩";
}

std::string format_state(const StateVector& v, const LieAlgebraSpec& spec)
{
	if (v.is_zero())
		return "0";
	std::string s;
	bool first = true;
	for (const auto& [m, c] : v.sorted_terms()) {
		if (!first)
			s += " + ";
		first = false;
		s += to_string(*c) + "·" + format_monomial(*m, spec);
	}
	return s;
}

nlohmann::json state_to_json(const StateVector& v, const LieAlgebraSpec& spec)
{
	nlohmann::json out = nlohmann::json::array();
	for (const auto& [m, c] : v.sorted_terms()) {
		nlohmann::json word = nlohmann::json::array();
		for (const auto& x : m->word) {
			nlohmann::json entry = nlohmann::json::array({spec.name(x.basis), -x.t0});
			for (int i = 0; i < x.m.rank(); ++i)
				entry.push_back(x.m[i]);
			word.push_back(entry);
		}
		out.push_back({{"word", word},
		               {"tail", m->tail == PBWMonomial::kVacuum ? std::string("1") : spec.name(m->tail)},
		               {"coeff", to_string(*c)}});
	}
	return out;
}

StateVector state_from_json(const nlohmann::json& j, const LieAlgebraSpec& spec, int rank)
{
	if (!j.is_array())
		throw ParseError("state JSON must be an array of terms");
	StateVector out;
	try {
		for (const auto& term : j) {
			PBWMonomial m;
			m.tail = tail_index(term.at("tail").get<std::string>(), spec);
			for (const auto& entry : term.at("word")) {
				if (!entry.is_array() || static_cast<int>(entry.size()) != rank + 2)
					throw ParseError("word entry must be [basis, k, m...] with r = " + std::to_string(rank));
				int b = tail_index(entry[0].get<std::string>(), spec);
				int k = entry[1].get<int>();
				if (b == PBWMonomial::kVacuum || k < 1)
					throw ParseError("word entries must be creation modes of g");
				MultiIndex mi(rank);
				for (int i = 0; i < rank; ++i)
					mi[i] = entry[i + 2].get<int>();
				m.word.push_back(LoopMode{b, -k, mi});
			}
			if (!m.is_canonical())
				throw ParseError("word is not in canonical PBW order");
			const auto& c = term.at("coeff");
			out.add(intern(m), c.is_string() ? parse_rational(c.get<std::string>()) : Rational(c.get<long>()));
		}
	} catch (const nlohmann::json::exception& e) {
		throw ParseError(std::string("state JSON: ") + e.what());
	} catch (const std::invalid_argument& e) {
		throw ParseError(e.what());
	}
	return out;
}

}  // namespace tva
