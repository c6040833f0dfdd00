#include "nlqw/linear_oracle.hpp"

#include <cmath>

namespace nlqw {

namespace {

constexpr std::size_t kR = 0;
constexpr std::size_t kL = 1;

std::size_t index(std::size_t site, std::size_t spin) { return 2 * site + spin; }

}  // namespace

DenseMatrix linear_walk_matrix(std::size_t sites, double theta) {
  const std::size_t dim = 2 * sites;
  const double c = std::cos(theta);
  const double s = std::sin(theta);

  // coin[out_spin][in_spin]; the |L><L| entry carries the minus sign.
  const double coin[2][2] = {{c, s}, {s, -c}};

  DenseMatrix coin_full{dim, dim, std::vector<complex>(dim * dim)};
  for (std::size_t n = 0; n < sites; ++n)
    for (std::size_t out = 0; out < 2; ++out)
      for (std::size_t in = 0; in < 2; ++in)
        coin_full(index(n, out), index(n, in)) = coin[out][in];

  DenseMatrix shift{dim, dim, std::vector<complex>(dim * dim)};
  for (std::size_t n = 0; n < sites; ++n) {
    const std::size_t left = (n + sites - 1) % sites;
    const std::size_t right = (n + 1) % sites;
    shift(index(left, kR), index(n, kR)) = 1.0;
    shift(index(right, kL), index(n, kL)) = 1.0;
  }

  DenseMatrix walk{dim, dim, std::vector<complex>(dim * dim)};
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t k = 0; k < dim; ++k) {
      const complex sik = shift(i, k);
      if (sik == complex{}) continue;
      for (std::size_t j = 0; j < dim; ++j) walk(i, j) += sik * coin_full(k, j);
    }
  return walk;
}

SpinorField linear_oracle_step(const SpinorField& field, double theta) {
  const std::size_t sites = field.size();
  const DenseMatrix m = linear_walk_matrix(sites, theta);

  std::vector<complex> in(2 * sites);
  for (std::size_t n = 0; n < sites; ++n) {
    in[index(n, kR)] = field.a()[n];
    in[index(n, kL)] = field.b()[n];
  }

  std::vector<complex> a(sites), b(sites);
  for (std::size_t i = 0; i < 2 * sites; ++i) {
    complex acc{};
    for (std::size_t j = 0; j < 2 * sites; ++j) acc += m(i, j) * in[j];
    (i % 2 == kR ? a : b)[i / 2] = acc;
  }
  return SpinorField(std::move(a), std::move(b), field.origin());
}

}  // namespace nlqw
