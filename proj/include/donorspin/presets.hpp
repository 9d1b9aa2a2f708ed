#pragma once

// Bundled sweep specs. presets/<name>.spec holds the same text.

#include <array>
#include <string>
#include <string_view>

#include "donorspin/errors.hpp"

namespace donorspin {

struct Preset {
  std::string_view name;
  std::string_view text;
};

inline constexpr std::array<Preset, 6> kPresets{{
    {"fig2", R"spec(# Single-donor levels against the Breit-Rabi parameter X.
target = breit_rabi_levels
constants = paper
[fixed]
donor = p31-si
[variable]
name = X
from = 0
to = 4
points = 201
spacing = linear
[outputs]
E_1_p1
E_1_0
E_1_m1
E_0_0
)spec"},
    {"fig3-vs-B", R"spec(# Two-donor levels against B at J close to 2 mu_B B for B = 2 T.
target = two_donor_levels
constants = paper
[fixed]
J = 56000
donor = p31-si
[variable]
name = B
from = 0
to = 4
points = 201
spacing = linear
)spec"},
    {"fig3-vs-J", R"spec(# Two-donor levels against J at B = 2 T.
target = two_donor_levels
constants = paper
[fixed]
B = 2
donor = p31-si
[variable]
name = J
from = 0
to = 112000
points = 401
spacing = linear
)spec"},
    {"stark", R"spec(# Gate detuning of nu_A, default geometry, no flat-band offset.
target = resonance_detuning
constants = paper
[fixed]
a = 5
c = 10
V_FB = 0
B = 2
[variable]
name = V
from = 0
to = 1
points = 101
spacing = linear
[outputs]
E_c
dA_over_A
dnu_A
)spec"},
    {"exchange", R"spec(# Asymptotic exchange against donor separation in silicon.
target = exchange_coupling
constants = paper
[fixed]
material = si
B = 2
[variable]
name = l
from = 5
to = 50
points = 226
spacing = linear
[outputs]
J
J_over_zeeman
formula_valid
)spec"},
    {"anticross", R"spec(# Reduced m + M = -1 spectrum through the anticrossing at B = 2 T.
target = reduced_spectrum
constants = paper
[fixed]
B = 2
donor = p31-si
[variable]
name = J
from = 53000
to = 59000
points = 601
spacing = linear
)spec"},
}};

inline std::string_view preset_text(std::string_view name) {
  for (const auto& p : kPresets)
    if (p.name == name) return p.text;
  throw SpecError("unknown preset '" + std::string(name) + "'");
}

}  // namespace donorspin
