#include "vortex/convexify.hpp"

#include <algorithm>
#include <stdexcept>

namespace vortex {

GridFunction resample_below(const GridFunction& psi, std::shared_ptr<const FittedMesh> lower) {
  const FittedMesh& old = *psi.mesh;
  if (lower->n1 != old.n1 || lower->n2 != old.n2 || lower->kind != old.kind)
    throw std::invalid_argument("resample_below: meshes have different layouts");
  GridFunction out = GridFunction::zeros(lower);
  std::vector<double> column(old.n2 + 1);
  for (int i = 0; i <= old.n1; ++i) {
    if (lower->column_top[i] == old.column_top[i]) {
      for (int j = 0; j <= old.n2; ++j) out.values[lower->vertex(i, j)] = psi.values[old.vertex(i, j)];
      continue;
    }
    for (int j = 0; j <= old.n2; ++j) column[j] = old.vertices[old.vertex(i, j)].y();
    for (int j = 0; j <= old.n2; ++j) {
      const double y = lower->vertices[lower->vertex(i, j)].y();
      auto it = std::upper_bound(column.begin(), column.end(), y);
      int k = static_cast<int>(it - column.begin()) - 1;
      k = std::clamp(k, 0, old.n2 - 1);
      const double y0 = column[k], y1 = column[k + 1];
      const double t = y1 > y0 ? std::clamp((y - y0) / (y1 - y0), 0.0, 1.0) : 0.0;
      const double a = psi.values[old.vertex(i, k)], b = psi.values[old.vertex(i, k + 1)];
      out.values[lower->vertex(i, j)] = t == 0.0 ? a : a + t * (b - a);
    }
  }
  return out;
}

HalfPair truncate_profile(const HalfProfile& h, const GridFunction& psi, int t0) {
  const int n = h.intervals();
  if (t0 <= 0 || t0 >= n) throw std::out_of_range("truncate_profile: cut node must be interior");
  HalfProfile cut = h;
  const double level = h.values[t0];
  for (int i = t0; i <= n; ++i) cut.values[i] = std::min(h.values[i], level);
  if (cut.values == h.values) return {h, psi};
  auto mesh = build_half_mesh(cut, psi.mesh->n2);
  return {cut, resample_below(psi, mesh)};
}

HalfPair chord_cut(const HalfProfile& h, const GridFunction& psi, int t1, int t2) {
  const int n = h.intervals();
  if (t1 >= t2) throw std::invalid_argument("chord_cut: need t1 < t2");
  if (t1 < 0 || t2 > n) throw std::out_of_range("chord_cut: node outside the profile");
  HalfProfile cut = h;
  const double a = h.values[t1], b = h.values[t2];
  for (int i = t1 + 1; i < t2; ++i) {
    const double chord = a + (b - a) * static_cast<double>(i - t1) / (t2 - t1);
    cut.values[i] = std::min(h.values[i], chord);
  }
  if (cut.values == h.values) return {h, psi};
  auto mesh = build_half_mesh(cut, psi.mesh->n2);
  return {cut, resample_below(psi, mesh)};
}

HalfPair convexify(const HalfProfile& h, const GridFunction& psi, int* sweeps) {
  HalfPair current{h, psi};
  const int n = h.intervals();
  int count = 0;
  for (bool changed = true; changed;) {
    changed = false;
    ++count;
    for (int t1 = 0; t1 < n; ++t1)
      for (int t2 = t1 + 2; t2 <= n; ++t2) {
        HalfPair next = chord_cut(current.first, current.second, t1, t2);
        if (next.first.values != current.first.values) {
          current = std::move(next);
          changed = true;
        }
      }
  }
  if (sweeps) *sweeps = count;
  return current;
}

}  // namespace vortex
