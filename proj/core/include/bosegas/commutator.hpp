#pragma once

#include <string>
#include <vector>

#include "bosegas/fock.hpp"
#include "bosegas/lattice.hpp"

namespace bosegas {

// Symbolic expansion of the nested commutators ad^(n) of the quadratic pair
// generator acting on a modified annihilation operator: ad^(0) = b_p and
// ad^(n) = [B(eta), ad^(n-1)].  Every term of ad^(n) is a signed product of
// factors that are either occupation weights, closed chains of mode sums
// capped by two modified ladder operators, or one trailing chain that ends
// on the external momentum.  Terms are generated by structural recursion
// (commuting the generator through each factor) and duplicates are kept, so
// the term count of ad^(n) is exactly 2^n n!.

// Closed chain factor of given order h >= 1: a product of 2h ladder
// operators in which h internal momenta are summed over the mode set, each
// weighted by eta^exponent.  The word starts and ends with a modified
// ladder operator (dagger given by flats[0] / sharps[h-1]); interior slots
// are plain ladder operators.  A true entry means daggered.  The factor
// carries an overall 1/N^h.
struct chain_factor {
    int order = 0;
    std::vector<int> exponents;   // size order, all >= 1
    std::vector<std::uint8_t> flats;   // size order: flats[0] is the head
    std::vector<std::uint8_t> sharps;  // size order: sharps[order-1] is the end
};

// Occupation-weight factor or closed chain, in left-to-right product order.
struct lambda_factor {
    enum class kind { weight_plain, weight_raised, chain };
    kind which = kind::weight_plain;   // plain = (N - Nplus)/N, raised = (N+1 - Nplus)/N
    chain_factor chain;                // used when which == kind::chain
};

// Trailing chain of order k >= 0 carrying the external momentum.  Order 0 is
// a single modified ladder operator at +/-p times eta_p^tail_exponent; order
// k >= 1 sums k internal momenta and ends with two plain ladder operators,
// the last one at the external momentum.  flats has size order+1 (the final
// entry fixes the dagger of the external operator and thereby its sign:
// undaggered acts at +p, daggered at -p); sharps has size order.  The factor
// carries an overall 1/N^k.
struct tail_factor {
    int order = 0;
    std::vector<int> exponents;        // size order
    std::vector<std::uint8_t> flats;   // size order + 1
    std::vector<std::uint8_t> sharps;  // size order
    int tail_exponent = 0;
};

struct sym_term {
    int sign = 1;   // +1 or -1
    std::vector<lambda_factor> lambdas;
    tail_factor tail;
    int depth = 0;  // commutator depth this term belongs to
};

struct term_list {
    int depth = 0;
    std::vector<sym_term> terms;
};

// Report from the structural validator.  ok == violations.empty().
struct structure_report {
    bool ok = true;
    std::size_t term_count = 0;
    std::vector<std::string> violations;
};

// Expand ad^(n) into its 2^n n! structured terms.  Deterministic order:
// children are emitted per parent term, per factor slot left to right, two
// pieces per slot.  Throws config_error for n < 0 or n > depth_cap.
term_list expand_ad(int n, int depth_cap = 6);

// Evaluate one term on the truncated basis: internal momenta run over the
// basis mode set, the external momentum is p (which must belong to the mode
// set along with -p).  eta is indexed like basis.modes.  Throws config_error
// on malformed terms or mismatched sizes.
sparse_matrix evaluate_term(const sym_term& term, const std::vector<double>& eta,
                            const momentum& p, const fock_basis& basis);

// Sum of evaluate_term over a whole list.
sparse_matrix evaluate_sum(const term_list& list, const std::vector<double>& eta,
                           const momentum& p, const fock_basis& basis);

// Check the structural laws every generated term satisfies: term count
// 2^n n!; per-term factor weights summing to depth+1; eta exponents summing
// to the depth; chain words internally consistent; non-normally-ordered
// adjacent pairs carrying exponent >= 2; tail parity linking the external
// exponent to the final dagger; and a unique all-weight term of the closed
// leading form.  Violations are reported, not thrown.
structure_report verify_structure(const term_list& list);

// One line per term: sign, factors, tail.  Stable across runs; meant for
// golden-file comparisons.
std::string to_text(const term_list& list);

// Matrix oracle: ad^(0..depth) computed as nested commutators with the
// generator matrix built from eta.  Entry n is ad^(n).
std::vector<sparse_matrix> ad_matrices(const fock_basis& basis, const std::vector<double>& eta,
                                       const momentum& p, int depth);

}  // namespace bosegas
