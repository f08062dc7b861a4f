#include "tva/rational.hpp"

#include <array>
#include <cctype>
#include <stdexcept>

namespace tva {

namespace {

bool is_integer_literal(std::string_view s)
{
	if (s.empty())
		return false;
	std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
	if (i == s.size())
		return false;
	for (; i < s.size(); ++i)
		if (!std::isdigit(static_cast<unsigned char>(s[i])))
			return false;
	return true;
}

std::string strip_plus(std::string_view s)
{
	if (!s.empty() && s[0] == '+')
		s.remove_prefix(1);
	return std::string(s);
}

mpz_class compute_binomial(long n, long i)
{
	mpz_class num = 1;
	mpz_class den = 1;
	for (long j = 0; j < i; ++j) {
		num *= n - j;
		den *= j + 1;
	}
	return num / den;
}

constexpr long kTableRadius = 64;

struct BinomialTable {
	std::array<std::array<mpz_class, kTableRadius + 1>, 2 * kTableRadius + 1> values;
	BinomialTable()
	{
		for (long n = -kTableRadius; n <= kTableRadius; ++n)
			for (long i = 0; i <= kTableRadius; ++i)
				values[n + kTableRadius][i] = compute_binomial(n, i);
	}
};

}  // namespace

Rational parse_rational(std::string_view text)
{
	while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())))
		text.remove_prefix(1);
	while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
		text.remove_suffix(1);
	auto slash = text.find('/');
	std::string_view num = text.substr(0, slash);
	std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
	if (!is_integer_literal(num) || !is_integer_literal(den) || den[0] == '-' || den[0] == '+')
		throw std::invalid_argument("malformed rational: '" + std::string(text) + "'");
	mpz_class p(strip_plus(num));
	mpz_class q{std::string(den)};
	if (q == 0)
		throw std::invalid_argument("zero denominator: '" + std::string(text) + "'");
	Rational out(p, q);
	out.canonicalize();
	return out;
}

std::string to_string(const Rational& q)
{
	return q.get_str();
}

const mpz_class& binomial(long n, long i)
{
	static const mpz_class zero = 0;
	static const BinomialTable table;
	if (i < 0)
		return zero;
	if (n >= -kTableRadius && n <= kTableRadius && i <= kTableRadius)
		return table.values[n + kTableRadius][i];
	thread_local mpz_class scratch;
	scratch = compute_binomial(n, i);
	return scratch;
}

}  // namespace tva
