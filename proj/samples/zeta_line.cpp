// Prints enclosures of |zeta(1+it)|^2, 1/|zeta(1+it)| and H(t) at a few heights.

#include <cstdio>
#include <initializer_list>

#include "bvkappa/hproduct.hpp"
#include "bvkappa/zetafn.hpp"

int main() {
  using namespace bvk;
  AcceleratedH h(250);
  for (double t : {0.1, 0.45, 1.0, 14.134725, 100.0, 1000.0}) {
    Ball bt = Ball::exact(t);
    Ball z2 = zeta_one_line_sq(bt);
    Ball inv = Ball(1) / sqrt(z2);
    std::printf("t = %-10g |zeta|^2 = %s\n", t, z2.to_string(15).c_str());
    std::printf("%14s 1/|zeta| = %s   H(t) = %s\n", "", inv.to_string(12).c_str(), h(bt).to_string(9).c_str());
  }
}
