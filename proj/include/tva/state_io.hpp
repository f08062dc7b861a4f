#pragma once

#include "tva/vacuum_module.hpp"

#include "json.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tva {

class ParseError : public std::invalid_argument {
public:
	using std::invalid_argument::invalid_argument;
};

/// "2", "2,-1" or "(2,-1)" with exactly `rank` entries.
MultiIndex parse_multi_index(std::string_view text, int rank);

/// State references:
///   vac | 1                   the vacuum
///   f                         a tail in g
///   e(-1,2)f(-2,0)            modes applied right to left to the vacuum
///   e(-1,2)|f                 the same modes applied to the tail f
///   3/2*e(-1,0) + -1*h(-2,0)  rational combinations
///   @file.json                the JSON state format
/// Modes are applied through `module`, so any word is accepted and brought to
/// canonical form. Throws ParseError.
StateVector parse_state(std::string_view text, const RestrictedModule& module,
                        const std::filesystem::path& base_dir = {});

/// "c·|e(-1,2) f(-2,0) 1⟩ + ..." in canonical order; "0" for the zero state.
std::string format_state(const StateVector& v, const LieAlgebraSpec& spec);
std::string format_monomial(const PBWMonomial& m, const LieAlgebraSpec& spec);

/// [{"word": [[basis, k, m...]], "tail": name or "1", "coeff": "p/q"}], with
/// each word entry a creation mode basis(-k, m).
nlohmann::json state_to_json(const StateVector& v, const LieAlgebraSpec& spec);
StateVector state_from_json(const nlohmann::json& j, const LieAlgebraSpec& spec, int rank);

}  // namespace tva
