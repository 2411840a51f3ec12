#pragma once

#include <vector>

#include "tsqkd/fock.hpp"
#include "tsqkd/keymap.hpp"

// Heterodyne measurement with trusted detector imperfections: efficiency
// eta_d and electronic noise nu_el enter the POVM as a displaced thermal
// operator, G_y = D(y/sqrt(eta_d)) rho_th(n_d) D^dag(y/sqrt(eta_d)) / (eta_d pi)
// with n_d = (1 - eta_d + nu_el) / eta_d.
namespace tsqkd::detector {

using fock::Cutoff;
using fock::FockOperator;

struct DetectorParams {
  double efficiency = 1.0;        // eta_d in (0, 1]
  double electronic_noise = 0.0;  // nu_el >= 0, SNU

  void validate() const;
  bool ideal() const { return efficiency == 1.0 && electronic_noise == 0.0; }
  double thermal_mean() const { return (1.0 - efficiency + electronic_noise) / efficiency; }
};

// Number of thermal terms kept inside the POVM product. The ideal detector
// needs only the vacuum term; otherwise 3 n_max + 10 unless overridden.
int povm_thermal_terms(const DetectorParams& detector, Cutoff cutoff, int override_terms = 0);

FockOperator povm_element(Complex y, const DetectorParams& detector, Cutoff cutoff,
                          int thermal_terms = 0);

// Moment observables of the heterodyne outcome, restricted to the cutoff:
//   F_Q = sqrt(eta_d) q,  S_Q = eta_d q^2 + (1 - eta_d/2 + nu_el) I,
// and likewise for P.
struct ObservableSet {
  FockOperator first_q;
  FockOperator first_p;
  FockOperator second_q;
  FockOperator second_p;
};

ObservableSet observables(const DetectorParams& detector, Cutoff cutoff);

struct RegionOptions {
  int thermal_terms = 0;  // 0 = povm_thermal_terms default
  double abs_tol = 1e-14;
  double rel_tol = 1e-12;
};

struct RegionOperatorSet {
  std::vector<FockOperator> key;  // R_0..R_3
  FockOperator discard;           // R_perp, zero when the radius is 0
  protocol::KeyMapRegions regions;
  DetectorParams detector;
  Cutoff cutoff{1};
  double completeness_deficit = 0.0;  // max |sum R - I|
  double radial_limit = 0.0;          // upper radial integration bound
  int thermal_terms = 0;

  FockOperator completeness() const;
};

// R_z = integral of G_y over sector z. The angular integral is analytic; the
// radial one uses adaptive Gauss-Kronrod up to a radius where the integrand is
// below 1e-16 of its peak.
RegionOperatorSet region_operators(const protocol::KeyMapRegions& regions,
                                   const DetectorParams& detector, Cutoff cutoff,
                                   const RegionOptions& options = {});

// Angular factor of R_z(m, n): integral of exp(i k theta) over sector z,
// k = m - n. For four symbols it vanishes whenever k is a nonzero multiple of 4.
Complex sector_phase_integral(int k, int z, int symbols = 4);

}  // namespace tsqkd::detector
