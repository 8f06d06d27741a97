#include "pintervals/table.hpp"

#include <algorithm>

namespace pintervals {

bool IntervalRow::contains(double y) const noexcept {
  if (empty) return false;
  if (set) return set->contains(y);
  return bounds.contains(y);
}

double IntervalRow::width() const noexcept {
  if (empty) return 0.0;
  if (set) return set->width();
  return bounds.width();
}

void IntervalTable::warn(std::string code, std::string message, std::optional<std::size_t> row) {
  warnings.push_back({std::move(code), std::move(message), row});
}

bool IntervalTable::has_warning(const std::string& code) const noexcept {
  return std::any_of(warnings.begin(), warnings.end(),
                     [&](const Warning& w) { return w.code == code; });
}

}  // namespace pintervals
