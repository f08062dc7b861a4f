#pragma once

#include "doctest.h"

#include "tva/axioms.hpp"
#include "tva/state_io.hpp"

#include <string>

namespace testing {

inline const std::string kData = TVA_DATA_DIR;

inline const tva::LieAlgebraSpec& sl2()
{
	static const tva::LieAlgebraSpec s = tva::LieAlgebraSpec::from_file(kData + "/sl2.json");
	return s;
}

inline const tva::LieAlgebraSpec& abelian()
{
	static const tva::LieAlgebraSpec s = tva::LieAlgebraSpec::from_file(kData + "/abelian1.json");
	return s;
}

inline tva::ModeWindow window(int rank, int lo, int hi, int radius)
{
	tva::ModeWindow w;
	w.m0_lo = lo;
	w.m0_hi = hi;
	w.m.assign(rank, {-radius, radius});
	return w;
}

inline void add(tva::ModeWindow& w, const std::string& text, const tva::RestrictedModule& V)
{
	w.states.push_back(tva::parse_state(text, V));
	w.state_labels.push_back(text);
}

inline tva::StateVector st(const std::string& text, const tva::RestrictedModule& V) { return tva::parse_state(text, V); }

inline std::string show(const tva::StateVector& v, const tva::RestrictedModule& V) { return tva::format_state(v, V.spec()); }

}  // namespace testing
