#pragma once

namespace hglc {

// Outcome of a bounded backward search. `underivable` is only reported
// when every branch of the search space was exhausted without the budget
// clipping anything; if some branch hit the budget the result is
// `exhausted` and underivability is not claimed.
enum class Verdict { derivable, underivable, exhausted };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::derivable: return "derivable";
    case Verdict::underivable: return "underivable";
    default: return "exhausted";
  }
}

}  // namespace hglc
