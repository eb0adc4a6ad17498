// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <vector>

#include "redsimp/reduction.hpp"

namespace redsimp {

// Enumerates the fiber {z in body : write(z) = p} with loop bounds derived by
// Fourier-Motzkin over (p, z); every candidate is checked against the body.
class FiberScanner {
 public:
  explicit FiberScanner(const Reduction& r);

  void for_each(const std::vector<long>& p, long n,
                const std::function<void(const std::vector<long>&)>& f) const;
  std::size_t count(const std::vector<long>& p, long n) const;

 private:
  struct Row {
    long coef = 0;             // on the loop variable
    std::vector<long> rest;    // on (p, z_0 .. z_{k-1})
    long param = 0;
    long constant = 0;
    bool equality = false;
  };
  struct Check {
    std::vector<long> coeffs;
    long param = 0;
    long constant = 0;
    bool equality = false;
  };

  bool scan(std::size_t level, std::vector<long>& vars, long n,
            const std::function<void(const std::vector<long>&)>& f) const;

  std::size_t m_ = 0;
  std::size_t d_ = 0;
  std::vector<std::vector<Row>> levels_;
  std::vector<Check> body_;   // over z
  std::vector<Check> write_;  // rows of write(z) - p over (p, z)
  bool empty_ = false;
};

}  // namespace redsimp
