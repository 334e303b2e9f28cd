// A coarse kappa run (T = 1000, eps = 1/100) with the audit log on stdout.

#include <iostream>

#include "bvkappa/kappa.hpp"

int main() {
  bvk::KappaPlan plan;
  plan.eps = mpq_class(1, 100);
  plan.t_end = 1000;
  plan.set_width(1e-3);
  bvk::KappaReport r = bvk::compute_kappa(plan);
  std::cout << bvk::audit_log(r);
  std::cout << "took " << r.seconds << " s\n";
  return r.flags.empty() ? 0 : 1;
}
