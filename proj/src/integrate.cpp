#include "etdrdp/integrate.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace etdrdp {

std::string_view scheme_name(Scheme scheme) {
  switch (scheme) {
    case Scheme::EtdRdpIf:
      return "etd-rdp-if";
    case Scheme::EtdRdp:
      return "etd-rdp";
    case Scheme::ImexBdf2:
      return "imex-bdf2";
    case Scheme::ImexTr:
      return "imex-tr";
    case Scheme::ImexAdams2:
      return "imex-adams2";
    case Scheme::Etd1If:
      return "etd1-if";
  }
  return "unknown";
}

Scheme parse_scheme(std::string_view text) {
  std::string key(text);
  std::transform(key.begin(), key.end(), key.begin(), [](unsigned char ch) {
    return ch == '_' ? '-' : static_cast<char>(std::tolower(ch));
  });
  for (Scheme s : {Scheme::EtdRdpIf, Scheme::EtdRdp, Scheme::ImexBdf2, Scheme::ImexTr, Scheme::ImexAdams2,
                   Scheme::Etd1If}) {
    if (key == scheme_name(s)) return s;
  }
  throw InvalidArgument("unknown scheme '" + std::string(text) + "'");
}

StepPlan plan_steps(double final_time, double dt) {
  if (!(dt > 0.0)) throw InvalidArgument("time step must be positive");
  if (!(final_time >= 0.0)) throw InvalidArgument("final time must be non-negative");
  StepPlan plan;
  if (final_time == 0.0) {
    plan.dt = dt;
    return plan;
  }
  plan.steps = std::max<Index>(1, static_cast<Index>(std::llround(final_time / dt)));
  plan.dt = final_time / static_cast<double>(plan.steps);
  plan.adjusted = std::abs(plan.dt - dt) > 1e-12 * dt;
  if (!plan.adjusted) plan.dt = dt;
  return plan;
}

}  // namespace etdrdp
