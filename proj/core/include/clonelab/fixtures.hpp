#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "clonelab/ops.hpp"
#include "clonelab/rel.hpp"

namespace clonelab {

namespace fixtures {

/// ({0,1}; c0 = {0}, c1 = {1}, R = {01, 10, 11})
Structure b2();
/// The directed cycle on E_p with relation R = {(i, i+1 mod p)}.
Structure cycle(std::size_t p);
/// (E_n; c0 = {0}, ..., c{n-1} = {n-1})
Structure idempotent(std::size_t n);
/// ({0}; R = {(0,0)})
Structure c1();
/// The 21-element structure with R, S the graphs of
///   r = (0 1 2)(5 6 7)(8 9 10)(e b a)(d g i)(f h c)
///   s = (1 4)(2 3)(5 6)(7 8)(j e)(b c)(a d)(i f)
/// where a..j are the elements 11..20.
Structure k21();

/// b2, c2, c3, c4, i2, i3, c1, k21.
const std::vector<std::string>& names();
Structure by_name(std::string_view name);

}  // namespace fixtures

namespace catalog {

Operation boolean_and();
Operation boolean_or();
Operation xor2();
Operation xor3();
Operation boolean_majority();
/// x - y + z mod 3
Operation affine3();
/// x if x = y, else z
Operation dual_discriminator(std::size_t k = 3);
/// Binary minimum over E_k.
Operation minimum(std::size_t k = 3);
/// Majority over E_3 with value c on the six rainbow triples.
Operation symmetric_majority(Elem c);
/// Minority over E_3 with value c on the six rainbow triples.
Operation symmetric_minority(Elem c);

/// and, or, xor2, xor3, majority2, affine3, dd3, min3, maj3c{0,1,2}, min3c{0,1,2}.
const std::vector<std::string>& names();
Operation by_name(std::string_view name);

}  // namespace catalog

}  // namespace clonelab
