#pragma once

#include "tva/pbw.hpp"

#include "json.hpp"

#include <string>
#include <utility>
#include <vector>

namespace tva {

/// Finite box of mode indices {m0 in [A,B]} x prod [A_i,B_i] together with
/// the test states that identities are applied to.
struct ModeWindow {
	int m0_lo = 0;
	int m0_hi = 0;
	std::vector<std::pair<int, int>> m;
	std::vector<StateVector> states;
	std::vector<std::string> state_labels;

	int rank() const { return static_cast<int>(m.size()); }
	bool empty() const;
	std::vector<MultiIndex> m_values() const;
	std::vector<std::pair<int, MultiIndex>> cells() const;
	std::size_t cell_count() const;

	/// Same box with a different m0 range.
	ModeWindow with_m0(int lo, int hi) const;

	/// Index ranges and state labels; states themselves are not serialized.
	nlohmann::json to_json() const;
};

/// Result of one window check. On failure `witness` holds the coefficient
/// tuple and both sides.
struct Finding {
	std::string identity;
	std::string paper_ref;
	std::string subject;
	nlohmann::json window;
	std::string status = "pass";  // pass | fail | cap-exceeded | info | error
	nlohmann::json witness;
	double wall_ms = 0;

	bool passed() const { return status == "pass" || status == "info"; }
	nlohmann::json to_json() const;
	static Finding from_json(const nlohmann::json& j);
};

}  // namespace tva
