#include "tns/field.hpp"

#include <algorithm>
#include <cmath>

namespace tns {

Field& Field::operator+=(const Field& o) {
  if (o.data.size() != data.size()) throw invalid_parameter("Field +=: shape mismatch");
  for (size_t i = 0; i < data.size(); ++i) data[i] += o.data[i];
  return *this;
}

Field& Field::operator-=(const Field& o) {
  if (o.data.size() != data.size()) throw invalid_parameter("Field -=: shape mismatch");
  for (size_t i = 0; i < data.size(); ++i) data[i] -= o.data[i];
  return *this;
}

Field& Field::operator*=(real s) {
  for (real& v : data) v *= s;
  return *this;
}

Field axpy(const Field& a, real s, const Field& b) {
  if (a.data.size() != b.data.size()) throw invalid_parameter("axpy: shape mismatch");
  Field out = a;
  for (size_t i = 0; i < out.data.size(); ++i) out.data[i] += s * b.data[i];
  return out;
}

void add_scaled(Field& a, real s, const Field& b) {
  if (a.data.size() != b.data.size()) throw invalid_parameter("add_scaled: shape mismatch");
  for (size_t i = 0; i < a.data.size(); ++i) a.data[i] += s * b.data[i];
}

real max_abs(const Field& f) {
  real m = 0.0;
  for (real v : f.data) m = std::max(m, std::abs(v));
  return m;
}

real mean(const Field& f, int c) {
  const auto s = f.comp(c);
  real acc = 0.0;
  for (real v : s) acc += v;
  return acc / static_cast<real>(f.npts);
}

}  // namespace tns
