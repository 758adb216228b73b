#ifndef MODOP_REPORT_HPP_
#define MODOP_REPORT_HPP_

#include <string>
#include <utility>
#include <vector>

namespace modop {

// One failed check. `check` names the law or relation, `detail` the witness.
struct Finding {
  std::string check;
  std::string detail;

  friend bool operator==(const Finding&, const Finding&) = default;
};

// Outcome of a checker: empty `failures` means the data passed.
struct Report {
  std::vector<Finding> failures;
  std::vector<std::string> warnings;
  std::size_t checked = 0;

  bool ok() const noexcept { return failures.empty(); }

  void fail(std::string check, std::string detail) {
    failures.push_back({std::move(check), std::move(detail)});
  }

  bool names(const std::string& check) const {
    for (const Finding& f : failures)
      if (f.check == check) return true;
    return false;
  }

  void merge(Report other) {
    for (Finding& f : other.failures) failures.push_back(std::move(f));
    for (std::string& w : other.warnings) warnings.push_back(std::move(w));
    checked += other.checked;
  }
};

}  // namespace modop

#endif  // MODOP_REPORT_HPP_
