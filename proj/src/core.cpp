#include "heis/core.hpp"

#include <sstream>

namespace heis {

std::string to_string(const Point& p) {
  std::ostringstream os;
  os.precision(17);
  os << '(' << p.x[0] << ", " << p.y[0] << ", " << p.t << ')';
  return os.str();
}

}  // namespace heis
