#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "permcohom/perm/group.hpp"

namespace pcoh::perm {

/// S_n generated by the adjacent transpositions (1,2), (2,3), ...
PermGroup symmetric_group(std::size_t n);
/// A_n generated by the 3-cycles (1,2,k).
PermGroup alternating_group(std::size_t n);
/// Z/n generated by the n-cycle (1,...,n).
PermGroup cyclic_group(std::size_t n);
/// Product on disjoint point sets: a's points first, then b's.
PermGroup direct_product(const PermGroup& a, const PermGroup& b);
/// S_{n1} x S_{n2} x ... acting on consecutive blocks.
PermGroup young_subgroup(const std::vector<std::size_t>& blocks);
/// Dihedral group of order 8 as <(1,2),(3,4),(1,3)(2,4)>, the Sylow
/// 2-subgroup of S4.
PermGroup dihedral8();

/// Generators of the subgroup K of S8 spanned by the iterated wreath
/// product Z2 wr Z2 wr Z2 and (3,5)(4,6).
inline constexpr std::string_view kGroupKCommaForm =
    "(1,2),(3,4),(5,6),(7,8),(1,3)(2,4),(5,7)(6,8),(1,5)(2,6)(3,7)(4,8),(3,5)(4,6)";
/// The same group, compact notation and a different generator order;
/// the first seven generate a Sylow 2-subgroup of S8.
inline constexpr std::string_view kGroupKCompactForm =
    "(12),(34),(13)(24),(56),(78),(57)(68),(15)(26)(37)(48),(35)(46)";
/// D8 x D8 inside K.
inline constexpr std::string_view kGroupLCommaForm = "(1,2),(3,4),(5,6),(7,8),(1,3)(2,4),(5,7)(6,8)";
inline constexpr std::string_view kGroupLCompactForm = "(12),(34),(13)(24),(56),(78),(57)(68)";

PermGroup group_k();
PermGroup group_l();

/// Resolves a group name ("S4", "A5", "C2", "Z4", "D8", "V4", "K", "L",
/// "S2xS2") or generator text in cycle notation. Throws ResourceLimit when
/// the order exceeds element_cap.
PermGroup named_group(std::string_view spec, std::size_t element_cap = kDefaultElementCap);

}  // namespace pcoh::perm
