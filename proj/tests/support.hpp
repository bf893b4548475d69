#pragma once

#include <random>
#include <string>
#include <vector>

#include "lfi/formula.hpp"

namespace lfi::gen {

// Uniform over connectives; atoms only once depth runs out or on a coin flip.
inline Formula random_formula(std::mt19937_64& rng, int depth, const std::vector<std::string>& atoms = {"p", "q"}) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 6);
  auto sub = [&] { return random_formula(rng, depth - 1, atoms); };
  switch (pick(rng)) {
    case 0:
    case 1: return Formula::atom(atoms[rng() % atoms.size()]);
    case 2: return Formula::neg(sub());
    case 3: return Formula::circ(sub());
    case 4: {
      Formula a = sub();
      return Formula::conj(a, sub());
    }
    case 5: {
      Formula a = sub();
      return Formula::disj(a, sub());
    }
    default: {
      Formula a = sub();
      return Formula::imp(a, sub());
    }
  }
}

}  // namespace lfi::gen
