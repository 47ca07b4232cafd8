#include "clonelab/common.hpp"

#include <sstream>

namespace clonelab {

std::uint64_t checked_pow(std::uint64_t base, std::uint64_t exp, std::uint64_t cap) {
  std::uint64_t result = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    if (base != 0 && result > cap / base) {
      throw CapExceeded("enumeration size " + std::to_string(base) + "^" +
                        std::to_string(exp) + " exceeds cap " + std::to_string(cap));
    }
    result *= base;
  }
  if (result > cap) {
    throw CapExceeded("enumeration size exceeds cap " + std::to_string(cap));
  }
  return result;
}

void decode_index(std::uint64_t index, std::size_t k, std::vector<Elem>& digits) {
  for (std::size_t i = digits.size(); i-- > 0;) {
    digits[i] = static_cast<Elem>(index % k);
    index /= k;
  }
}

std::uint64_t encode_index(const Elem* digits, std::size_t length, std::size_t k) {
  std::uint64_t index = 0;
  for (std::size_t i = 0; i < length; ++i) index = index * k + digits[i];
  return index;
}

std::string tuple_to_string(const Tuple& t) {
  std::ostringstream out;
  out << '(';
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) out << ',';
    out << t[i];
  }
  out << ')';
  return out.str();
}

}  // namespace clonelab
