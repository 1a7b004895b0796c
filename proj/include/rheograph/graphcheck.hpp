#pragma once

// Numerical certification that a constitutive graph satisfies the
// maximal-monotone graph axioms: origin membership, monotonicity of the
// stress/rate pairing, coercivity bounds, and duality round trips.
//
// Maximality itself quantifies over the whole tensor space and is not tested
// directly; the surrogate shipped here is "single-valued continuous magnitude
// map + monotonicity", which is the same route the underlying theory uses.

#include <cstdint>
#include <string>

#include "rheograph/model_io.hpp"
#include "rheograph/models.hpp"
#include "rheograph/rng.hpp"
#include "rheograph/tensor.hpp"

namespace rheo {

struct SampleDomain {
  double d_min = 1e-3;   // magnitude range, sampled log-uniformly
  double d_max = 1e3;
  int n_directions = 16;  // pool of random symmetric traceless unit tensors
  std::uint64_t seed = 1;
};

void validate(const SampleDomain& dom);

enum class Axiom { G1, G2, G4, B1, B2, B4, Duality, NonInverse };
std::string to_string(Axiom a);
Axiom axiom_from_string(const std::string& s);

// One certification result. pass <=> worst_violation <= tolerance. The
// violation is signed: negative values are margin, positive values measure
// the worst offence found.
struct CertReport {
  Axiom axiom = Axiom::G2;
  long n_samples = 0;
  double worst_violation = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  json witness;  // extremal sample in full precision (shape varies by axiom)
  // coercivity only (G4/B4)
  double fitted_alpha = 0.0;
  double fitted_beta = 0.0;
  double q = 0.0;                     // exponent used in the bound
  bool used_constants_route = false;  // closed-form constants vs pure fit
};

json to_json(const CertReport& rep);

// Draw one on-graph point; multivalued families (yield stresses, activation
// dead zones, plateau/ray limit graphs) alternate branches so every piece of
// the graph is exercised.
TensorPair sample_graph_point(const BulkModel& m, const SampleDomain& dom,
                              Rng& rng);

struct ScalarPair {
  double s = 0.0;  // tangential traction
  double v = 0.0;  // tangential slip
};
ScalarPair sample_bc_point(const BoundaryModel& bc, const SampleDomain& dom,
                           Rng& rng);

// (G1)/(B1): the origin belongs to the graph.
CertReport check_origin(const BulkModel& m);
CertReport check_origin(const BoundaryModel& bc);

// (G2)/(B2): (S1-S2):(D1-D2) >= -1e-12 * |S1-S2||D1-D2| over sampled pairs.
CertReport check_monotonicity(const BulkModel& m, const SampleDomain& dom,
                              long n_pairs);
CertReport check_monotonicity(const BoundaryModel& bc, const SampleDomain& dom,
                              long n_pairs);

// (G4): S:D >= alpha (|S|^q' + |D|^q) - beta on sampled on-graph points.
// When delta_star > 0 and the model matches one of the two normalized
// activated forms, alpha and beta come from the closed-form constant chain
// (q = r for the shifted form, q = max{r,2} for the additive form);
// otherwise the constants are fitted from the samples.
CertReport check_coercivity(const BulkModel& m, double r,
                            const SampleDomain& dom);

// (B4): 2-graph bound for the scalar boundary graph, fitted constants.
CertReport check_coercivity(const BoundaryModel& bc, const SampleDomain& dom);

// Round-trip rate -> stress (forward model) -> rate (inverse model's rate
// map). expect_inverse selects the axiom label and pass direction: Duality
// passes when the max relative error is <= 1e-10, NonInverse passes when a
// witness with error > 1e-2 exists.
CertReport check_duality(const BulkModel& forward, const BulkModel& inverse,
                         const SampleDomain& dom, long n_samples,
                         bool expect_inverse);

}  // namespace rheo
