#include "gather/catalog.hpp"

#include <array>
#include <stdexcept>

namespace gather {
namespace {

struct Entry {
  std::string_view name;
  std::string_view description;
  std::string_view body;
};

// Robot ids are 0-based in the order of the `robot` lines.
constexpr std::array kEntries{
    Entry{"fig2-cycle",
          "1-bivalent start, nearest-neighbor, grouped cycle schedule: equivalent configurations recur",
          R"(name = fig2-cycle
algorithm = nearest-neighbor
scheduler = scripted
script = cycle grouped
robot = 0 0 100
robot = 1 0 100
robot = 1 0 100
robot = 1 0 100
robot = 1 0 100
goal = recurrence
recurrence = equivalent
max_steps = 9
expect = Recurrence
)"},
    Entry{"k2-swap",
          "swap adversary against nearest-neighbor under a 2-bounded centralized scheduler",
          R"(name = k2-swap
algorithm = nearest-neighbor
scheduler = two-bounded-centralized
adversary = swap
robot = 0 0 100
robot = 10 0 100
robot = 0 1 100
goal = recurrence
recurrence = anonymous
max_steps = 1000
expect = Recurrence
)"},
    Entry{"appendix-a1",
          "straight-line fault-tolerant rule cycles between four castles (no side move)",
          R"(name = appendix-a1
algorithm = det-ft-naive
scheduler = round-robin
order = 1 0 2 3 4 5 6 7
robot = -2 0 1
robot = 2 0 1
robot = -10 0 1
robot = -10 0 1
robot = 10 0 1
robot = 10 0 1
robot = -2 0 1
robot = 2 0 1
crash = 2 0
crash = 3 0
crash = 4 0
crash = 5 0
crash = 6 0
crash = 7 0
goal = weak
recurrence = anonymous
max_steps = 50
expect = Recurrence
)"},
    Entry{"appendix-a1-sidemove",
          "same four-castle start with the side move enabled: weak gathering is reached",
          R"(name = appendix-a1-sidemove
algorithm = det-ft
scheduler = round-robin
order = 1 0 2 3 4 5 6 7
robot = -2 0 1
robot = 2 0 1
robot = -10 0 1
robot = -10 0 1
robot = 10 0 1
robot = 10 0 1
robot = -2 0 1
robot = 2 0 1
crash = 2 0
crash = 3 0
crash = 4 0
crash = 5 0
crash = 6 0
crash = 7 0
goal = weak
max_steps = 10000
expect = WeakGathered
)"},
    Entry{"byz-balancer",
          "(n,f) = (4,1): a balancing Byzantine robot keeps two castles alive under a 3-bounded schedule",
          R"(name = byz-balancer
algorithm = det-ft
scheduler = k-bounded-centralized
k = 3
adversary = byzantine
robot = 0 0 10
robot = 1 0 10
robot = 1 0 10
robot = 0 0 10
byzantine = 3 balancer
goal = weak
recurrence = anonymous
stop_on_recurrence = false
max_steps = 10000
expect = BudgetExhausted
)"},
    Entry{"byz-switch",
          "(n,f) = (5,2): two Byzantine robots alternate groups under a 3-bounded schedule",
          R"(name = byz-switch
algorithm = det-ft
scheduler = k-bounded-centralized
k = 3
adversary = byzantine
robot = 0 0 10
robot = 1 0 10
robot = 1 0 10
robot = 0 0 10
robot = 0 0 10
byzantine = 3 switch 4
byzantine = 4 switch 4
goal = weak
recurrence = anonymous
stop_on_recurrence = false
max_steps = 10000
expect = BudgetExhausted
)"},
    Entry{"byz-attractor",
          "an attractor Byzantine robot lures nearest-neighbor robots back and forth",
          R"(name = byz-attractor
algorithm = nearest-neighbor
scheduler = scripted
script = 0 | 2 | 1 | 2
robot = 0 0 100
robot = 10 0 100
robot = 1 0 100
byzantine = 2 attractor
goal = weak
recurrence = anonymous
max_steps = 1000
expect = Recurrence
)"},
    Entry{"byz-breaker",
          "a Byzantine robot leaves every gathering point, so gathering never becomes final",
          R"(name = byz-breaker
algorithm = nearest-neighbor
scheduler = round-robin
order = 2 0 1 3
robot = 0 0 10
robot = 0 0 10
robot = 3 0 10
robot = 0 0 10
byzantine = 3 gathered-breaker
goal = none
recurrence = anonymous
stop_on_recurrence = false
max_steps = 1000
)"},
    Entry{"lemma10-n2",
          "two robots at distance 10 with reach 1 running the basic probabilistic rule",
          R"(name = lemma10-n2
algorithm = prob-basic
scheduler = unfair-arbitrary
robot = 0 0 1
robot = 10 0 1
goal = strong
max_steps = 1000000
expect = StrongGathered
)"},
    Entry{"crash-wg",
          "(n,f) = (5,2) crash faults, probabilistic fault-tolerant rule, fair scheduler",
          R"(name = crash-wg
algorithm = prob-ft
multiplicity = on
scheduler = fair-arbitrary
window = 20
random_robots = 5 0 10 1
crash = 0 3
crash = 1 7
f = 2
goal = weak
max_steps = 100000
expect = WeakGathered
)"},
};

const Entry& find(std::string_view name) {
  for (const auto& e : kEntries)
    if (e.name == name) return e;
  throw std::invalid_argument("unknown catalog scenario '" + std::string(name) + "'");
}

}  // namespace

std::vector<std::string> catalog_names() {
  std::vector<std::string> names;
  for (const auto& e : kEntries) names.emplace_back(e.name);
  return names;
}

std::string_view catalog_description(std::string_view name) { return find(name).description; }

std::string catalog_text(std::string_view name) {
  return std::string(kScenarioHeader) + "\n" + std::string(find(name).body);
}

Scenario catalog_scenario(std::string_view name) { return parse_scenario(catalog_text(name)); }

}  // namespace gather
