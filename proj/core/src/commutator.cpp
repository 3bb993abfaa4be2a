#include "bosegas/commutator.hpp"

#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "bosegas/common.hpp"

namespace bosegas {

namespace {

using u8 = std::uint8_t;

lambda_factor make_weight(bool raised) {
    lambda_factor lf;
    lf.which = raised ? lambda_factor::kind::weight_raised : lambda_factor::kind::weight_plain;
    return lf;
}

lambda_factor wrap_chain(chain_factor c) {
    lambda_factor lf;
    lf.which = lambda_factor::kind::chain;
    lf.chain = std::move(c);
    return lf;
}

sym_term child_of(const sym_term& parent) {
    sym_term t = parent;
    t.depth += 1;
    return t;
}

// Commuting the generator with one occupation weight replaces it by a mode
// sum over a creation pair or an annihilation pair (order-1 chain), sign +.
void weight_children(const sym_term& parent, std::size_t w, std::vector<sym_term>& out) {
    for (u8 daggered : {u8{1}, u8{0}}) {
        sym_term t = child_of(parent);
        t.lambdas[w] = wrap_chain(chain_factor{1, {1}, {daggered}, {daggered}});
        out.push_back(std::move(t));
    }
}

// Head of a chain: the flip piece toggles the head dagger, bumps its
// exponent, and deposits a weight directly left of the unit (plain for an
// annihilation head, raised for a creation head); the extension piece
// prepends a fresh summed link whose two new slots carry the opposite
// dagger of the old head.
void chain_head_children(const sym_term& parent, std::size_t w, std::vector<sym_term>& out) {
    const u8 head = parent.lambdas[w].chain.flats[0];
    {
        sym_term t = child_of(parent);
        t.sign = -t.sign;
        chain_factor& c = t.lambdas[w].chain;
        c.flats[0] ^= 1;
        c.exponents[0] += 1;
        t.lambdas.insert(t.lambdas.begin() + static_cast<std::ptrdiff_t>(w),
                         make_weight(head != 0));
        out.push_back(std::move(t));
    }
    {
        sym_term t = child_of(parent);
        chain_factor& c = t.lambdas[w].chain;
        const u8 nb = head ^ u8{1};
        c.order += 1;
        c.exponents.insert(c.exponents.begin(), 1);
        c.flats.insert(c.flats.begin(), nb);
        c.sharps.insert(c.sharps.begin(), nb);
        out.push_back(std::move(t));
    }
}

// End of a chain: the flip piece toggles the end dagger, bumps its exponent,
// and deposits a weight directly right of the unit -- plain when the old end
// was daggered, raised when it was not (the two dagger cases normal-order
// through the unit differently); the extension piece appends a fresh summed
// link whose new slots carry the opposite dagger of the old end.
void chain_end_children(const sym_term& parent, std::size_t w, std::vector<sym_term>& out) {
    const chain_factor& src = parent.lambdas[w].chain;
    const std::size_t h = static_cast<std::size_t>(src.order);
    const u8 end = src.sharps[h - 1];
    {
        sym_term t = child_of(parent);
        t.sign = -t.sign;
        chain_factor& c = t.lambdas[w].chain;
        c.sharps[h - 1] ^= 1;
        c.exponents[h - 1] += 1;
        t.lambdas.insert(t.lambdas.begin() + static_cast<std::ptrdiff_t>(w) + 1,
                         make_weight(end == 0));
        out.push_back(std::move(t));
    }
    {
        sym_term t = child_of(parent);
        chain_factor& c = t.lambdas[w].chain;
        const u8 nb = end ^ u8{1};
        c.order += 1;
        c.exponents.push_back(1);
        c.flats.push_back(nb);
        c.sharps.push_back(nb);
        out.push_back(std::move(t));
    }
}

// Internal link of a chain (positions ell = 1..h-1): both pieces sever the
// word into two chains; one severed side flips (toggled dagger, exponent
// bumped) while the other keeps its dagger.  Piece one flips the
// annihilation side, piece two the creation side; both signs flip.
void chain_pair_children(const sym_term& parent, std::size_t w, std::size_t ell,
                         std::vector<sym_term>& out) {
    const chain_factor& src = parent.lambdas[w].chain;
    const std::size_t h = static_cast<std::size_t>(src.order);
    chain_factor left{static_cast<int>(ell),
                      {src.exponents.begin(), src.exponents.begin() + static_cast<std::ptrdiff_t>(ell)},
                      {src.flats.begin(), src.flats.begin() + static_cast<std::ptrdiff_t>(ell)},
                      {src.sharps.begin(), src.sharps.begin() + static_cast<std::ptrdiff_t>(ell)}};
    chain_factor right{static_cast<int>(h - ell),
                       {src.exponents.begin() + static_cast<std::ptrdiff_t>(ell), src.exponents.end()},
                       {src.flats.begin() + static_cast<std::ptrdiff_t>(ell), src.flats.end()},
                       {src.sharps.begin() + static_cast<std::ptrdiff_t>(ell), src.sharps.end()}};
    const bool sharp_daggered = src.sharps[ell - 1] != 0;  // left end slot
    for (int piece = 0; piece < 2; ++piece) {
        // piece 0 flips the annihilation side, piece 1 the creation side
        const bool flip_sharp = (piece == 0) ? !sharp_daggered : sharp_daggered;
        chain_factor lf = left;
        chain_factor rf = right;
        if (flip_sharp) {
            lf.sharps[ell - 1] ^= 1;
            lf.exponents[ell - 1] += 1;
        } else {
            rf.flats[0] ^= 1;
            rf.exponents[0] += 1;
        }
        sym_term t = child_of(parent);
        t.sign = -t.sign;
        t.lambdas[w] = wrap_chain(std::move(lf));
        t.lambdas.insert(t.lambdas.begin() + static_cast<std::ptrdiff_t>(w) + 1,
                         wrap_chain(std::move(rf)));
        out.push_back(std::move(t));
    }
}

// Order-0 tail: flip toggles the dagger, bumps the external exponent, and
// appends a weight at the end of the factor list; extension grows the tail
// to order 1.
void tail_g_children(const sym_term& parent, std::vector<sym_term>& out) {
    const u8 head = parent.tail.flats[0];
    {
        sym_term t = child_of(parent);
        t.sign = -t.sign;
        t.tail.flats[0] ^= 1;
        t.tail.tail_exponent += 1;
        t.lambdas.push_back(make_weight(head != 0));
        out.push_back(std::move(t));
    }
    {
        sym_term t = child_of(parent);
        const u8 nb = head ^ u8{1};
        t.tail.order = 1;
        t.tail.exponents = {1};
        t.tail.flats = {nb, head};
        t.tail.sharps = {nb};
        out.push_back(std::move(t));
    }
}

void tail_head_children(const sym_term& parent, std::vector<sym_term>& out) {
    const u8 head = parent.tail.flats[0];
    {
        sym_term t = child_of(parent);
        t.sign = -t.sign;
        t.tail.flats[0] ^= 1;
        t.tail.exponents[0] += 1;
        t.lambdas.push_back(make_weight(head != 0));
        out.push_back(std::move(t));
    }
    {
        sym_term t = child_of(parent);
        const u8 nb = head ^ u8{1};
        t.tail.order += 1;
        t.tail.exponents.insert(t.tail.exponents.begin(), 1);
        t.tail.flats.insert(t.tail.flats.begin(), nb);
        t.tail.sharps.insert(t.tail.sharps.begin(), nb);
        out.push_back(std::move(t));
    }
}

// Internal link of the tail (ell = 1..k-1): severs into a closed chain of
// order ell (appended to the factor list) and a tail of order k-ell.
void tail_pair_children(const sym_term& parent, std::size_t ell, std::vector<sym_term>& out) {
    const tail_factor& src = parent.tail;
    const std::size_t k = static_cast<std::size_t>(src.order);
    chain_factor left{static_cast<int>(ell),
                      {src.exponents.begin(), src.exponents.begin() + static_cast<std::ptrdiff_t>(ell)},
                      {src.flats.begin(), src.flats.begin() + static_cast<std::ptrdiff_t>(ell)},
                      {src.sharps.begin(), src.sharps.begin() + static_cast<std::ptrdiff_t>(ell)}};
    tail_factor right;
    right.order = static_cast<int>(k - ell);
    right.exponents.assign(src.exponents.begin() + static_cast<std::ptrdiff_t>(ell), src.exponents.end());
    right.flats.assign(src.flats.begin() + static_cast<std::ptrdiff_t>(ell), src.flats.end());
    right.sharps.assign(src.sharps.begin() + static_cast<std::ptrdiff_t>(ell), src.sharps.end());
    right.tail_exponent = src.tail_exponent;
    const bool sharp_daggered = src.sharps[ell - 1] != 0;
    for (int piece = 0; piece < 2; ++piece) {
        const bool flip_sharp = (piece == 0) ? !sharp_daggered : sharp_daggered;
        chain_factor lf = left;
        tail_factor rf = right;
        if (flip_sharp) {
            lf.sharps[ell - 1] ^= 1;
            lf.exponents[ell - 1] += 1;
        } else {
            rf.flats[0] ^= 1;
            rf.exponents[0] += 1;
        }
        sym_term t = child_of(parent);
        t.sign = -t.sign;
        t.lambdas.push_back(wrap_chain(std::move(lf)));
        t.tail = std::move(rf);
        out.push_back(std::move(t));
    }
}

// Final link of the tail: severs into a closed chain of order k plus an
// order-0 tail.  Flipping the external side bumps the external exponent and
// toggles the surviving dagger.
void tail_final_children(const sym_term& parent, std::vector<sym_term>& out) {
    const tail_factor& src = parent.tail;
    const std::size_t k = static_cast<std::size_t>(src.order);
    chain_factor left{src.order, src.exponents,
                      {src.flats.begin(), src.flats.begin() + static_cast<std::ptrdiff_t>(k)},
                      src.sharps};
    const bool sharp_daggered = src.sharps[k - 1] != 0;
    for (int piece = 0; piece < 2; ++piece) {
        const bool flip_sharp = (piece == 0) ? !sharp_daggered : sharp_daggered;
        chain_factor lf = left;
        tail_factor rf;
        rf.order = 0;
        rf.flats = {src.flats[k]};
        rf.tail_exponent = src.tail_exponent;
        if (flip_sharp) {
            lf.sharps[k - 1] ^= 1;
            lf.exponents[k - 1] += 1;
        } else {
            rf.flats[0] ^= 1;
            rf.tail_exponent += 1;
        }
        sym_term t = child_of(parent);
        t.sign = -t.sign;
        t.lambdas.push_back(wrap_chain(std::move(lf)));
        t.tail = std::move(rf);
        out.push_back(std::move(t));
    }
}

void expand_children(const sym_term& parent, std::vector<sym_term>& out) {
    for (std::size_t w = 0; w < parent.lambdas.size(); ++w) {
        const lambda_factor& lf = parent.lambdas[w];
        if (lf.which != lambda_factor::kind::chain) {
            weight_children(parent, w, out);
            continue;
        }
        chain_head_children(parent, w, out);
        for (std::size_t ell = 1; ell < static_cast<std::size_t>(lf.chain.order); ++ell) {
            chain_pair_children(parent, w, ell, out);
        }
        chain_end_children(parent, w, out);
    }
    if (parent.tail.order == 0) {
        tail_g_children(parent, out);
        return;
    }
    tail_head_children(parent, out);
    for (std::size_t ell = 1; ell < static_cast<std::size_t>(parent.tail.order); ++ell) {
        tail_pair_children(parent, ell, out);
    }
    tail_final_children(parent, out);
}

std::string flag_string(const std::vector<u8>& v) {
    std::string s;
    s.reserve(v.size());
    for (u8 f : v) s.push_back(f ? '*' : '.');
    return s;
}

std::string int_list(const std::vector<int>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s.push_back(',');
        s += std::to_string(v[i]);
    }
    return s;
}

void check_chain_shape(const chain_factor& c, const char* where) {
    if (c.order < 1 || c.exponents.size() != static_cast<std::size_t>(c.order) ||
        c.flats.size() != static_cast<std::size_t>(c.order) ||
        c.sharps.size() != static_cast<std::size_t>(c.order)) {
        throw config_error(std::string(where) + ": chain factor has inconsistent sizes");
    }
    for (int e : c.exponents) {
        if (e < 1) throw config_error(std::string(where) + ": chain exponent below 1");
    }
}

void check_tail_shape(const tail_factor& t, const char* where) {
    if (t.order < 0 || t.exponents.size() != static_cast<std::size_t>(t.order) ||
        t.flats.size() != static_cast<std::size_t>(t.order) + 1 ||
        t.sharps.size() != static_cast<std::size_t>(t.order) || t.tail_exponent < 0) {
        throw config_error(std::string(where) + ": tail factor has inconsistent sizes");
    }
    for (int e : t.exponents) {
        if (e < 1) throw config_error(std::string(where) + ": tail exponent below 1");
    }
}

struct op_cache {
    std::vector<sparse_matrix> a, ad, b, bd;
    std::vector<std::size_t> neg;
    sparse_matrix plain, raised, ident;
    double n_particles = 0.0;
};

op_cache build_cache(const fock_basis& basis) {
    op_cache c;
    const std::size_t m = basis.modes.size();
    c.a.reserve(m);
    c.ad.reserve(m);
    c.b.reserve(m);
    c.bd.reserve(m);
    c.neg.reserve(m);
    for (const momentum& q : basis.modes) {
        c.a.push_back(op_a(basis, q));
        c.ad.push_back(op_adag(basis, q));
        c.b.push_back(op_b(basis, q));
        c.bd.push_back(op_bdag(basis, q));
        const auto ni = basis.modes.index_of(-q);
        if (ni < 0) throw config_error("mode set is not closed under negation");
        c.neg.push_back(static_cast<std::size_t>(ni));
    }
    c.plain = op_weight(basis, 0);
    c.raised = op_weight(basis, 1);
    c.ident.resize(static_cast<Eigen::Index>(basis.dim()), static_cast<Eigen::Index>(basis.dim()));
    c.ident.setIdentity();
    c.n_particles = static_cast<double>(basis.n_particles);
    return c;
}

// ladder operator at a summed mode: role_flat picks the convention in which
// a daggered slot acts at +q and an undaggered one at -q; the sharp role is
// the mirror image.
const sparse_matrix& summed_atom(const op_cache& cache, bool b_type, bool daggered,
                                 bool role_flat, std::size_t qi) {
    const std::size_t idx = (daggered == role_flat) ? qi : cache.neg[qi];
    if (b_type) return daggered ? cache.bd[idx] : cache.b[idx];
    return daggered ? cache.ad[idx] : cache.a[idx];
}

sparse_matrix evaluate_chain(const chain_factor& c, const std::vector<double>& eta,
                             const op_cache& cache) {
    const std::size_t h = static_cast<std::size_t>(c.order);
    sparse_matrix m = cache.ident;
    for (std::size_t ell = h; ell >= 1; --ell) {
        const bool headish = (ell == 1);
        const bool endish = (ell == h);
        sparse_matrix acc(m.rows(), m.cols());
        for (std::size_t qi = 0; qi < eta.size(); ++qi) {
            if (eta[qi] == 0.0) continue;
            const double f = std::pow(eta[qi], c.exponents[ell - 1]);
            const sparse_matrix& first =
                summed_atom(cache, headish, c.flats[ell - 1] != 0, true, qi);
            const sparse_matrix& second =
                summed_atom(cache, endish, c.sharps[ell - 1] != 0, false, qi);
            acc += f * (first * (second * m)).eval();
        }
        m = std::move(acc);
    }
    m *= std::pow(cache.n_particles, -c.order);
    m.prune(0.0);
    return m;
}

sparse_matrix evaluate_tail(const tail_factor& t, const std::vector<double>& eta,
                            double eta_p, std::size_t pi, std::size_t pni,
                            const op_cache& cache) {
    const std::size_t k = static_cast<std::size_t>(t.order);
    const bool final_daggered = t.flats[k] != 0;
    // external slot: an undaggered operator acts at +p, a daggered one at -p
    sparse_matrix m;
    if (k == 0) {
        m = final_daggered ? cache.bd[pni] : cache.b[pi];
    } else {
        m = final_daggered ? cache.ad[pni] : cache.a[pi];
    }
    m = std::pow(eta_p, t.tail_exponent) * m;
    for (std::size_t ell = k; ell >= 1; --ell) {
        const bool headish = (ell == 1);
        sparse_matrix acc(m.rows(), m.cols());
        for (std::size_t qi = 0; qi < eta.size(); ++qi) {
            if (eta[qi] == 0.0) continue;
            const double f = std::pow(eta[qi], t.exponents[ell - 1]);
            const sparse_matrix& first =
                summed_atom(cache, headish, t.flats[ell - 1] != 0, true, qi);
            const sparse_matrix& second =
                summed_atom(cache, false, t.sharps[ell - 1] != 0, false, qi);
            acc += f * (first * (second * m)).eval();
        }
        m = std::move(acc);
    }
    m *= std::pow(cache.n_particles, -t.order);
    m.prune(0.0);
    return m;
}

sparse_matrix evaluate_with_cache(const sym_term& term, const std::vector<double>& eta,
                                  const momentum& p, const fock_basis& basis,
                                  const op_cache& cache) {
    if (term.sign != 1 && term.sign != -1) throw config_error("evaluate_term: sign must be +1 or -1");
    if (eta.size() != basis.modes.size()) {
        throw config_error("evaluate_term: eta length does not match the mode set");
    }
    check_tail_shape(term.tail, "evaluate_term");
    const auto pi = basis.modes.index_of(p);
    const auto pni = basis.modes.index_of(-p);
    if (pi < 0 || pni < 0) {
        throw config_error("evaluate_term: external momentum " + to_string(p) +
                           " (and its negative) must belong to the mode set");
    }
    sparse_matrix m = cache.ident;
    for (const lambda_factor& lf : term.lambdas) {
        switch (lf.which) {
            case lambda_factor::kind::weight_plain:
                m = (m * cache.plain).eval();
                break;
            case lambda_factor::kind::weight_raised:
                m = (m * cache.raised).eval();
                break;
            case lambda_factor::kind::chain:
                check_chain_shape(lf.chain, "evaluate_term");
                m = (m * evaluate_chain(lf.chain, eta, cache)).eval();
                break;
        }
    }
    m = (m * evaluate_tail(term.tail, eta, eta[static_cast<std::size_t>(pi)],
                           static_cast<std::size_t>(pi), static_cast<std::size_t>(pni), cache))
            .eval();
    if (term.sign < 0) m *= -1.0;
    m.prune(0.0);
    return m;
}

unsigned long long expected_count(int depth) {
    unsigned long long c = 1;
    for (int i = 1; i <= depth; ++i) c *= 2ull * static_cast<unsigned long long>(i);
    return c;
}

}  // namespace

term_list expand_ad(int n, int depth_cap) {
    if (n < 0) throw config_error("expand_ad: depth must be nonnegative");
    if (n > depth_cap) {
        throw config_error("expand_ad: depth " + std::to_string(n) + " exceeds the cap " +
                           std::to_string(depth_cap) + "; raise the cap explicitly if intended");
    }
    sym_term seed;
    seed.sign = 1;
    seed.tail.order = 0;
    seed.tail.flats = {0};
    seed.tail.tail_exponent = 0;
    seed.depth = 0;

    term_list out;
    out.depth = 0;
    out.terms = {seed};
    for (int d = 1; d <= n; ++d) {
        std::vector<sym_term> next;
        next.reserve(out.terms.size() * 2 * static_cast<std::size_t>(d));
        for (const sym_term& t : out.terms) expand_children(t, next);
        out.terms = std::move(next);
        out.depth = d;
    }
    return out;
}

sparse_matrix evaluate_term(const sym_term& term, const std::vector<double>& eta,
                            const momentum& p, const fock_basis& basis) {
    const op_cache cache = build_cache(basis);
    return evaluate_with_cache(term, eta, p, basis, cache);
}

sparse_matrix evaluate_sum(const term_list& list, const std::vector<double>& eta,
                           const momentum& p, const fock_basis& basis) {
    const op_cache cache = build_cache(basis);
    sparse_matrix sum(static_cast<Eigen::Index>(basis.dim()), static_cast<Eigen::Index>(basis.dim()));
    for (const sym_term& t : list.terms) {
        sum += evaluate_with_cache(t, eta, p, basis, cache);
    }
    sum.prune(0.0);
    return sum;
}

structure_report verify_structure(const term_list& list) {
    structure_report rep;
    rep.term_count = list.terms.size();
    auto flag = [&rep](std::size_t i, const std::string& what) {
        rep.violations.push_back("term " + std::to_string(i) + ": " + what);
    };

    if (list.depth < 0) rep.violations.push_back("list: negative depth");
    const unsigned long long want = expected_count(std::max(list.depth, 0));
    if (list.terms.size() != want) {
        rep.violations.push_back("list: expected " + std::to_string(want) + " terms, found " +
                                 std::to_string(list.terms.size()));
    }

    std::size_t leading = 0;
    std::size_t leading_at = 0;
    for (std::size_t i = 0; i < list.terms.size(); ++i) {
        const sym_term& t = list.terms[i];
        if (t.sign != 1 && t.sign != -1) flag(i, "sign must be +1 or -1");
        if (t.depth != list.depth) flag(i, "depth differs from the list depth");

        bool shapes_ok = true;
        int weight_sum = 0;     // counting law: weights 1, chain h+1, tail k+1
        int exponent_sum = 0;   // exponent law: all eta powers sum to the depth
        bool all_weights = true;
        for (const lambda_factor& lf : t.lambdas) {
            if (lf.which != lambda_factor::kind::chain) {
                weight_sum += 1;
                continue;
            }
            all_weights = false;
            const chain_factor& c = lf.chain;
            if (c.order < 1 || c.exponents.size() != static_cast<std::size_t>(c.order) ||
                c.flats.size() != static_cast<std::size_t>(c.order) ||
                c.sharps.size() != static_cast<std::size_t>(c.order)) {
                flag(i, "chain factor has inconsistent sizes");
                shapes_ok = false;
                continue;
            }
            weight_sum += c.order + 1;
            for (int e : c.exponents) {
                exponent_sum += e;
                if (e < 1) flag(i, "chain exponent below 1");
            }
            for (std::size_t ell = 1; ell + 1 <= static_cast<std::size_t>(c.order); ++ell) {
                if (c.sharps[ell - 1] == c.flats[ell]) {
                    flag(i, "chain link " + std::to_string(ell) + " is not number preserving");
                }
            }
            for (std::size_t ell = 1; ell <= static_cast<std::size_t>(c.order); ++ell) {
                if (c.flats[ell - 1] == 0 && c.sharps[ell - 1] != 0 && c.exponents[ell - 1] < 2) {
                    flag(i, "non-normally-ordered chain slot with exponent below 2");
                }
            }
        }
        const tail_factor& tl = t.tail;
        if (tl.order < 0 || tl.exponents.size() != static_cast<std::size_t>(tl.order) ||
            tl.flats.size() != static_cast<std::size_t>(tl.order) + 1 ||
            tl.sharps.size() != static_cast<std::size_t>(tl.order) || tl.tail_exponent < 0) {
            flag(i, "tail factor has inconsistent sizes");
            shapes_ok = false;
        }
        if (shapes_ok) {
            weight_sum += tl.order + 1;
            exponent_sum += tl.tail_exponent;
            for (int e : tl.exponents) {
                exponent_sum += e;
                if (e < 1) flag(i, "tail exponent below 1");
            }
            for (std::size_t ell = 1; ell <= static_cast<std::size_t>(tl.order); ++ell) {
                if (tl.sharps[ell - 1] == tl.flats[ell]) {
                    flag(i, "tail link " + std::to_string(ell) + " is not number preserving");
                }
                if (tl.flats[ell - 1] == 0 && tl.sharps[ell - 1] != 0 && tl.exponents[ell - 1] < 2) {
                    flag(i, "non-normally-ordered tail slot with exponent below 2");
                }
            }
            if (weight_sum != t.depth + 1) {
                flag(i, "factor weights sum to " + std::to_string(weight_sum) + ", expected " +
                            std::to_string(t.depth + 1));
            }
            if (exponent_sum != t.depth) {
                flag(i, "eta exponents sum to " + std::to_string(exponent_sum) + ", expected " +
                            std::to_string(t.depth));
            }
            if ((tl.tail_exponent % 2 == 0) != (tl.flats[static_cast<std::size_t>(tl.order)] == 0)) {
                flag(i, "external exponent parity does not match the final dagger");
            }
            if (all_weights && tl.order == 0) {
                leading += 1;
                leading_at = i;
            }
        }
    }

    if (leading != 1) {
        rep.violations.push_back("list: expected exactly one all-weight term, found " +
                                 std::to_string(leading));
    } else {
        const sym_term& t = list.terms[leading_at];
        const int n = list.depth;
        int plain = 0, raised = 0;
        for (const lambda_factor& lf : t.lambdas) {
            if (lf.which == lambda_factor::kind::weight_plain) plain += 1;
            if (lf.which == lambda_factor::kind::weight_raised) raised += 1;
        }
        const bool form_ok = plain == (n + 1) / 2 && raised == n / 2 &&
                             t.sign == (n % 2 == 0 ? 1 : -1) && t.tail.tail_exponent == n &&
                             t.tail.flats[0] == static_cast<u8>(n % 2);
        if (!form_ok) {
            rep.violations.push_back("list: the all-weight term does not match the closed form");
        }
    }

    rep.ok = rep.violations.empty();
    return rep;
}

std::string to_text(const term_list& list) {
    std::ostringstream os;
    for (const sym_term& t : list.terms) {
        os << (t.sign < 0 ? '-' : '+');
        for (const lambda_factor& lf : t.lambdas) {
            switch (lf.which) {
                case lambda_factor::kind::weight_plain:
                    os << " W";
                    break;
                case lambda_factor::kind::weight_raised:
                    os << " W+";
                    break;
                case lambda_factor::kind::chain:
                    os << " C{o=" << lf.chain.order << ";z=" << int_list(lf.chain.exponents)
                       << ";f=" << flag_string(lf.chain.flats) << ";s="
                       << flag_string(lf.chain.sharps) << '}';
                    break;
            }
        }
        os << " T{o=" << t.tail.order << ";j=" << int_list(t.tail.exponents) << ";f="
           << flag_string(t.tail.flats) << ";s=" << flag_string(t.tail.sharps) << ";t="
           << t.tail.tail_exponent << "}\n";
    }
    return os.str();
}

std::vector<sparse_matrix> ad_matrices(const fock_basis& basis, const std::vector<double>& eta,
                                       const momentum& p, int depth) {
    if (depth < 0) throw config_error("ad_matrices: depth must be nonnegative");
    const sparse_matrix gen = build_b(basis, eta);
    std::vector<sparse_matrix> out;
    out.reserve(static_cast<std::size_t>(depth) + 1);
    out.push_back(op_b(basis, p));
    for (int n = 1; n <= depth; ++n) {
        sparse_matrix next = gen * out.back() - out.back() * gen;
        next.prune(0.0);
        out.push_back(std::move(next));
    }
    return out;
}

}  // namespace bosegas
