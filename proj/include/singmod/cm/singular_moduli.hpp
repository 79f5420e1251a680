#pragma once

// Reduction type of CM points and the p-adic data of singular moduli of a
// given discriminant: Newton polygon valuations and, for ordinary
// reduction, the roots of H_d in small unramified extensions.

#include <gmpxx.h>

#include <string>
#include <vector>

#include "singmod/cm/class_group.hpp"
#include "singmod/cm/hilbert.hpp"
#include "singmod/core/arith.hpp"
#include "singmod/padic/number.hpp"
#include "singmod/padic/polynomial.hpp"
#include "singmod/padic/roots.hpp"

namespace singmod {

enum class ReductionType { ordinary, supersingular };

inline std::string to_string(ReductionType t) { return t == ReductionType::ordinary ? "ordinary" : "supersingular"; }

/// Ordinary iff p splits in the CM field, i.e. (d|p) = 1.
inline ReductionType reduction_type(long long d, u64 p) {
    if (!is_prime(p)) throw domain_error("reduction_type needs a prime p");
    Discriminant const disc = make_discriminant(d);
    if (disc.conductor % static_cast<long long>(p) == 0) {
        throw domain_error("p = " + std::to_string(p) + " divides the conductor of " + std::to_string(d));
    }
    return kronecker(d, p) == 1 ? ReductionType::ordinary : ReductionType::supersingular;
}

struct SingularModulusRecord {
    long long d = 0;
    u64 p = 0;
    ReductionType type = ReductionType::supersingular;
    IntegerPolynomial hcp;
    /// Valuations of all roots of H_d with multiplicity, decreasing; an
    /// exact zero root contributes an infinite entry.
    std::vector<ExtValuation> valuations;
    /// Roots of residue degree <= f_max (ordinary reduction only).
    std::vector<PadicNumber> roots;
    bool roots_filled = false;

    /// Sum of the finite valuations.
    mpq_class finite_valuation_sum() const {
        mpq_class s = 0;
        for (auto const & v : valuations) {
            if (!v.infinite) s += v.value;
        }
        return s;
    }
};

inline SingularModulusRecord singular_moduli_at(long long d, u64 p, long precision, int f_max,
                                                HcpOptions const & opt = {}) {
    SingularModulusRecord r;
    r.d = d;
    r.p = p;
    r.type = reduction_type(d, p);
    r.hcp = hilbert_class_poly(d, opt);
    NewtonPolygon const np = newton_polygon(r.hcp, p);
    for (long i = 0; i < np.zero_multiplicity(); ++i) r.valuations.push_back(ExtValuation::infinity());
    for (auto const & [val, mult] : np.root_valuations()) {
        for (long i = 0; i < mult; ++i) r.valuations.push_back({false, val});
    }
    if (r.type == ReductionType::ordinary) {
        r.roots = roots_in_unramified(r.hcp, p, f_max, precision);
        r.roots_filled = true;
    }
    return r;
}

}  // namespace singmod
