#ifndef HPL_REPORT_HPP
#define HPL_REPORT_HPP

#include <string>
#include <vector>

namespace hpl {

struct Defect {
  std::string identity;  ///< which identity or term family
  std::string location;  ///< basis tuple it was evaluated on
  std::string value;     ///< nonzero residual
  bool operator==(const Defect&) const = default;
};

struct Verdict {
  std::string name;
  bool holds = true;
  std::vector<Defect> defects;
  bool operator==(const Verdict&) const = default;
};

/// Outcome of an identity check: one verdict per identity family.
struct IdentityReport {
  std::vector<Verdict> verdicts;

  bool holds() const {
    for (const auto& v : verdicts)
      if (!v.holds) return false;
    return true;
  }

  const Verdict* find(const std::string& name) const {
    for (const auto& v : verdicts)
      if (v.name == name) return &v;
    return nullptr;
  }

  void append(const IdentityReport& o) {
    verdicts.insert(verdicts.end(), o.verdicts.begin(), o.verdicts.end());
  }

  std::string render() const {
    std::string out;
    for (const auto& v : verdicts) {
      out += v.name + ": " + (v.holds ? "holds" : "fails") + "\n";
      for (const auto& d : v.defects) out += "  " + d.identity + " at " + d.location + " = " + d.value + "\n";
    }
    return out;
  }

  bool operator==(const IdentityReport&) const = default;
};

}  // namespace hpl

#endif  // HPL_REPORT_HPP
