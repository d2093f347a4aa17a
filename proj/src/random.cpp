#include "freeze/random.hpp"

#include <cmath>

namespace freeze {

namespace {
std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}
}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ (stream * 0xd1b54a32d192ed03ULL + 1));
}

double chi(Engine& engine, double dof) {
  if (dof <= 0.0) return 0.0;
  std::gamma_distribution<double> gamma(0.5 * dof, 2.0);
  return std::sqrt(gamma(engine));
}

}  // namespace freeze
