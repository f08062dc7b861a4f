#pragma once

#include "tva/field.hpp"
#include "tva/persistent_cache.hpp"
#include "tva/vertex_ops.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace tva {

/// The vertex algebra together with the module its fields act on.
struct AxiomContext {
	const VertexAlgebra& va;
	const RestrictedModule& W;
};

Finding check_weak_commutativity(const AxiomContext& ctx, const StateVector& u, const StateVector& v, int k,
                                 const ModeWindow& win);
/// Weak associativity applied to the single state w.
Finding check_weak_associativity(const AxiomContext& ctx, const StateVector& u, const StateVector& v,
                                 const StateVector& w, int l, const ModeWindow& win);
/// Searches k and l upward from 0 (to cap) and passes iff both identities
/// hold; the cap being hit gives status "cap-exceeded".
Finding check_jacobi(const AxiomContext& ctx, const StateVector& u, const StateVector& v, const StateVector& w,
                     const ModeWindow& win, int cap = 8);
/// The skew symmetry identity at the level of Y(Y(u)v) and the composite of
/// two skew maps returning the identity.
Finding check_skew_symmetry(const AxiomContext& ctx, const StateVector& u, const StateVector& v,
                            const ModeWindow& win);
/// u_{k,m} 1 = 0 for k >= 0, the derivative formula for u_{-k-1,m} 1 with
/// k <= max_k, and u_{n0,n} = (u_{-1,n} 1)_{n0,n}.
Finding check_vacuum_lemma(const AxiomContext& ctx, const StateVector& u, const ModeWindow& win, int max_k = 2);
/// [u_{p0,m}, v_{q0,q}] = sum_i C(p0,i) (u_{i,m} v)_{p0+q0-i, q+m}.
Finding check_commutator_formula(const AxiomContext& ctx, const StateVector& u, const StateVector& v,
                                 const ModeWindow& win);
/// Direct coefficient of the Jacobi identity at `samples` random index tuples.
Finding check_borcherds(const AxiomContext& ctx, const StateVector& u, const StateVector& v, const StateVector& w,
                        const ModeWindow& win, int samples, uint64_t seed);
/// x(y w) - y(x w) = [x, y] w with k acting as the level, for loop modes over win.
Finding check_module_law(const RestrictedModule& W, const ModeWindow& win);
/// a(n0, n) w = 0 for n0 > witness, and a(n0, n) maps degree d to d - n0.
Finding check_restrictedness(const RestrictedModule& W, const ModeWindow& win);
/// u_{(m0,m)} b for generators: [a,b] at m0 = 0, l<a,b> 1 at m0 = 1, 0 beyond.
Finding check_base_table(const VertexAlgebra& va, const ModeWindow& win);
/// Locality orders of generator currents against 2 / 1 / 0 from the bracket.
Finding check_locality_table(const FieldEngine& fe, const ModeWindow& win, int bound);
Finding check_lie_spec(const LieAlgebraSpec& spec);
/// Jacobi identity of the toroidal bracket on random loop-mode triples.
Finding check_toroidal_jacobi(const LieAlgebraSpec& spec, int rank, int triples, int radius, uint64_t seed);

/// Descriptive reference text for each identity id.
std::string identity_reference(const std::string& id);

/// Random PBW state with at most max_len creation modes (k <= max_k) from the
/// box, and with a g tail with probability one half.
StateVector random_state(std::mt19937_64& rng, const RestrictedModule& V, const std::vector<MultiIndex>& box,
                         int max_len, int max_k);

struct SuiteOptions {
	ModeWindow window;
	/// Window for the triple-product identities (usually smaller).
	ModeWindow triple_window;
	/// Generators of g, as tail states, plus whatever else should be tested.
	std::vector<StateVector> generators;
	std::vector<std::string> generator_labels;
	int cap = 8;
	int random_triples = 20;
	int toroidal_triples = 100;
	int borcherds_samples = 10;
	uint64_t seed = 1;
	int jobs = 1;
	bool twisted = true;
	bool v0 = true;
	int v0_depth = 3;
	int v0_max_degree = 3;
	PersistentCache* cache = nullptr;
	std::string session_key;
};

struct SuiteReport {
	std::vector<Finding> findings;
	bool all_passed() const;
	bool cap_exceeded() const;
	nlohmann::json to_json() const;
};

/// Job list: a key (for caching) and the work.
struct SuiteJob {
	std::string key;
	std::function<Finding()> run;
};

/// Runs jobs on `jobs` threads; findings come back in job order.
std::vector<Finding> run_jobs(const std::vector<SuiteJob>& jobs, int threads, PersistentCache* cache = nullptr,
                              const std::string& session_key = {});

/// The whole suite on V(l,0) (and a twisted module when enabled).
SuiteReport run_suite(const VacuumModule& V, const VertexAlgebra& va, const SuiteOptions& opt);

struct Mutation {
	std::string label;
	LieAlgebraSpec spec;
	Rational central_shift;
};

/// Single-entry corruptions: each structure constant entry, each form
/// entry, and the central term.
std::vector<Mutation> standard_mutations(const LieAlgebraSpec& spec);

struct MutationResult {
	std::string label;
	bool detected = false;
	std::vector<std::string> caught_by;
};

/// Runs the mutation-sensitive part of the suite once per mutation.
std::vector<MutationResult> run_mutations(const LieAlgebraSpec& spec, int rank, const Rational& level,
                                          const SuiteOptions& opt);

}  // namespace tva
