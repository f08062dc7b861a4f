#include "tva/window.hpp"

#include <stdexcept>

namespace tva {

bool ModeWindow::empty() const
{
	if (m0_lo > m0_hi)
		return true;
	for (const auto& [lo, hi] : m)
		if (lo > hi)
			return true;
	return false;
}

std::vector<MultiIndex> ModeWindow::m_values() const
{
	std::vector<MultiIndex> out;
	if (empty())
		return out;
	MultiIndex cur(rank());
	for (int i = 0; i < rank(); ++i)
		cur[i] = m[i].first;
	while (true) {
		out.push_back(cur);
		int i = rank() - 1;
		while (i >= 0 && cur[i] == m[i].second) {
			cur[i] = m[i].first;
			--i;
		}
		if (i < 0)
			break;
		++cur[i];
	}
	return out;
}

std::vector<std::pair<int, MultiIndex>> ModeWindow::cells() const
{
	std::vector<std::pair<int, MultiIndex>> out;
	auto ms = m_values();
	for (int m0 = m0_lo; m0 <= m0_hi; ++m0)
		for (const auto& mi : ms)
			out.push_back({m0, mi});
	return out;
}

std::size_t ModeWindow::cell_count() const
{
	if (empty())
		return 0;
	std::size_t n = static_cast<std::size_t>(m0_hi - m0_lo + 1);
	for (const auto& [lo, hi] : m)
		n *= static_cast<std::size_t>(hi - lo + 1);
	return n;
}

ModeWindow ModeWindow::with_m0(int lo, int hi) const
{
	ModeWindow w = *this;
	w.m0_lo = lo;
	w.m0_hi = hi;
	return w;
}

nlohmann::json ModeWindow::to_json() const
{
	nlohmann::json ranges = nlohmann::json::array();
	for (const auto& [lo, hi] : m)
		ranges.push_back({lo, hi});
	return {{"m0", {m0_lo, m0_hi}}, {"m", ranges}, {"states", state_labels}};
}

nlohmann::json Finding::to_json() const
{
	nlohmann::json j = {{"identity", identity}, {"paper_ref", paper_ref}, {"window", window},
	                    {"status", status},     {"witness", witness},     {"wall_ms", wall_ms}};
	if (!subject.empty())
		j["subject"] = subject;
	return j;
}

Finding Finding::from_json(const nlohmann::json& j)
{
	Finding f;
	f.identity = j.at("identity").get<std::string>();
	f.paper_ref = j.value("paper_ref", "");
	f.subject = j.value("subject", "");
	f.window = j.value("window", nlohmann::json());
	f.status = j.at("status").get<std::string>();
	f.witness = j.value("witness", nlohmann::json());
	f.wall_ms = j.value("wall_ms", 0.0);
	return f;
}

}  // namespace tva
