#pragma once

#include <optional>

#include "tsqkd/types.hpp"

namespace tsqkd::protocol {

// Reverse-reconciliation key map: four angular sectors
// arg(y) in [(2z-1)pi/4, (2z+1)pi/4) for |y| >= radius, discard otherwise.
struct KeyMapRegions {
  double postselection_radius = 0.0;  // Delta_a
  int symbols = 4;

  void validate() const;
};

// Returns the key symbol, or nullopt for the discard symbol. Points exactly on
// a sector edge go to the lower-indexed neighbour; |y| == radius passes.
std::optional<int> key_map(Complex y, const KeyMapRegions& regions);

}  // namespace tsqkd::protocol
