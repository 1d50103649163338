#include "bml/analysis.hpp"

#include <cmath>
#include <sstream>

#include "bml/direct.hpp"
#include "bml/errors.hpp"
#include "bml/rng.hpp"

namespace bml {

namespace {

// Zobrist keys for (color, place) plus the junction pointer.
class StateKeys {
public:
    explicit StateKeys(std::size_t n) : red_(n), blue_(n), ptr_(n) {
        SplitMix64 g(0x6A09E667F3BCC908ull ^ n);
        for (auto* v : {&red_, &blue_, &ptr_})
            for (auto& k : *v) k = g.next();
    }

    std::uint64_t occupancy(const NormalizedState& m) const {
        std::uint64_t h = 0;
        for (auto i : m.r.indices()) h ^= red_[i];
        for (auto i : m.b.indices()) h ^= blue_[i];
        return h;
    }

    std::uint64_t toggle(PushEvent ev) const {
        const auto& t = ev.kind == PushKind::RedPushed ? red_ : blue_;
        return t[ev.vacated_index] ^ t[ev.filled_index];
    }

    std::uint64_t pointer(std::size_t s) const { return ptr_[s]; }

private:
    std::vector<std::uint64_t> red_, blue_, ptr_;
};

// A state carrying an incrementally maintained hash of its occupancy.
struct Tracked {
    NormalizedState st;
    std::uint64_t occ = 0;

    void step(const StateKeys& keys) {
        const PushEvent ev = normalized_step_inplace(st);
        if (ev.kind != PushKind::None) occ ^= keys.toggle(ev);
    }
    std::uint64_t hash(const StateKeys& keys) const { return occ ^ keys.pointer(st.s); }
};

bool same_state(const Tracked& a, const Tracked& b, const StateKeys& keys) {
    return a.hash(keys) == b.hash(keys) && a.st == b.st;
}

std::string fmt(const Rational& q) {
    std::ostringstream os;
    os << q.numerator() << '/' << q.denominator();
    return os.str();
}

NamedCheck check(std::string name, bool ok, std::string detail) {
    return NamedCheck{std::move(name), ok, std::move(detail)};
}

// Calls visit(t, state) for every t in [0, period) at which the junction
// reaches a blue-free violation block: the pattern holds and the step into t
// pushed nothing. The walk covers period + 1 steps so that t = 0 sees its
// predecessor. Stops early when visit returns false.
template <typename Visit>
void for_each_arrival(const NormalizedState& entry, std::uint64_t period, Visit&& visit) {
    NormalizedState cur = entry;
    bool pushed = true;
    for (std::uint64_t t = 0; t <= period; ++t) {
        if (t > 0 && !pushed && structure_hypothesis_holds(cur))
            if (!visit(t % period, static_cast<const NormalizedState&>(cur))) return;
        if (t == period) break;
        pushed = normalized_step_inplace(cur).kind != PushKind::None;
    }
}


}  // namespace

std::uint64_t default_step_budget(std::size_t n, std::size_t total_cars) {
    return 50ull * n * (1ull + total_cars);
}

CycleReport find_cycle(const NormalizedState& m0, const CycleOptions& opts) {
    const std::size_t n = m0.n;
    const std::size_t red_cars = m0.r.count();
    const std::size_t blue_cars = m0.b.count();
    const std::uint64_t budget =
        opts.step_budget ? opts.step_budget : default_step_budget(n, red_cars + blue_cars);
    const StateKeys keys(n);

    std::uint64_t spent = 0;
    auto charge = [&] {
        if (++spent > budget)
            throw ResourceLimit("cycle not found within " + std::to_string(budget) + " steps", spent - 1);
    };

    // Brent: the hare runs ahead; the tortoise teleports to it at powers of two.
    Tracked start{m0, keys.occupancy(m0)};
    Tracked tortoise = start;
    Tracked hare = start;
    hare.step(keys);
    charge();
    std::uint64_t power = 1, lam = 1;
    while (!same_state(tortoise, hare, keys)) {
        if (power == lam) {
            tortoise = hare;
            power *= 2;
            lam = 0;
        }
        hare.step(keys);
        charge();
        ++lam;
    }

    // Transient: start both from m0, the hare lam steps ahead.
    tortoise = start;
    hare = start;
    for (std::uint64_t i = 0; i < lam; ++i) {
        hare.step(keys);
        charge();
    }
    std::uint64_t mu = 0;
    while (!same_state(tortoise, hare, keys)) {
        tortoise.step(keys);
        hare.step(keys);
        charge();
        ++mu;
    }

    CycleReport rep;
    rep.transient = mu;
    rep.period = lam;
    rep.entry = tortoise.st;
    rep.violations_on_cycle = violation_count(rep.entry);

    // Replay one period counting cars that lost a move to a push.
    std::uint64_t red_lost = 0, blue_lost = 0;
    NormalizedState cur = rep.entry;
    for (std::uint64_t t = 0; t < lam; ++t) {
        const PushEvent ev = normalized_step_inplace(cur);
        if (ev.kind == PushKind::RedPushed) {
            ++rep.red_pushes;
            red_lost += ev.run_length(n);
        } else if (ev.kind == PushKind::BluePushed) {
            ++rep.blue_pushes;
            blue_lost += ev.run_length(n);
        }
    }
    if (rep.violations_on_cycle > 0) {
        for_each_arrival(rep.entry, lam, [&](std::uint64_t, const NormalizedState& st) {
            const std::size_t left = st.r.prev(st.s);
            rep.m_min_block = std::min(st.r.run_ending_at(left), st.b.run_ending_at(left));
            return false;
        });
    }
    if (rep.violations_on_cycle > 0 && rep.m_min_block == 0) {
        // Junction never rests before the block: take the block while still whole.
        NormalizedState cur = rep.entry;
        for (std::uint64_t t = 0; t < lam; ++t) {
            if (structure_hypothesis_holds(cur)) {
                const std::size_t left = cur.r.prev(cur.s);
                rep.m_min_block = std::max(rep.m_min_block,
                                           std::min(cur.r.run_ending_at(left), cur.b.run_ending_at(left)));
            }
            normalized_step_inplace(cur);
        }
    }

    auto speed = [&](std::size_t cars, std::uint64_t lost) {
        if (cars == 0) return Rational(1);
        const auto total = static_cast<std::int64_t>(lam * cars);
        return Rational(total - static_cast<std::int64_t>(lost), total);
    };
    rep.speed_red = speed(red_cars, red_lost);
    rep.speed_blue = speed(blue_cars, blue_lost);

    if (lam * n <= opts.direct_check_limit) {
        const DirectState d0 = from_normalized(rep.entry);
        auto [d1, moves] = direct_run(d0, lam);
        if (!(d1 == d0) || moves.red_moves != lam * red_cars - red_lost ||
            moves.blue_moves != lam * blue_cars - blue_lost)
            throw std::logic_error("direct move counting disagrees with push accounting");
        rep.direct_checked = true;
    }
    return rep;
}

SegmentStats count_segments(const NormalizedState& m) {
    SegmentStats st;
    st.red_segments = m.r.run_count();
    st.blue_segments = m.b.run_count();
    st.total_segments = st.red_segments + st.blue_segments;
    st.longest = std::max(m.r.longest_run(), m.b.longest_run());
    return st;
}

Rational speed_bound(const Rational& p) {
    if (p <= 0 || p >= 1) throw DomainError("speed_bound requires 0 < p < 1");
    const Rational inv = Rational(1) / (p * 2);
    return inv < 1 ? inv : Rational(1);
}

std::int64_t c_of_p(const Rational& p) {
    if (p <= 0 || p * 2 >= 1) throw DomainError("c_of_p requires 0 < p < 1/2");
    const Rational q = p / (Rational(1) - p * 2);
    return q.numerator() / q.denominator();
}

IntInterval m_bounds_for_cars(std::int64_t n, std::int64_t c) {
    const std::int64_t lo = c > n ? c - n : 0;
    // 2mn/(2m+1) + m <= c  <=>  2mn + m(2m+1) <= c(2m+1); satisfied on [0, hi].
    auto fits = [&](std::int64_t m) {
        const __int128 lhs = static_cast<__int128>(2) * m * n + static_cast<__int128>(m) * (2 * m + 1);
        return lhs <= static_cast<__int128>(c) * (2 * m + 1);
    };
    std::int64_t hi = 0;
    while (fits(hi + 1)) ++hi;
    if (lo > hi)
        throw EmptyInterval("no block size m satisfies both car-count bounds (n=" + std::to_string(n) +
                            ", cars=" + std::to_string(c) + ")");
    return {lo, hi};
}

IntInterval m_bounds_grouped(std::int64_t n, std::int64_t c) {
    const std::int64_t lo = c > n ? c - n : 0;
    auto fits = [&](std::int64_t m) {
        if (m > n) return false;
        const std::int64_t groups = (n + m) / (2 * m + 1);
        return n + m - groups <= c;
    };
    std::int64_t hi = 0;
    while (fits(hi + 1)) ++hi;
    if (lo > hi)
        throw EmptyInterval("no block size m satisfies both car-count bounds (n=" + std::to_string(n) +
                            ", cars=" + std::to_string(c) + ")");
    return {lo, hi};
}

IntInterval m_bounds(std::int64_t n, const Rational& p) {
    if (n <= 0 || p < 0) throw DomainError("m_bounds requires n > 0 and p >= 0");
    return m_bounds_for_cars(n, 2 * round_half_up(p, n));
}

bool structure_hypothesis_holds(const NormalizedState& m) {
    // Arrival pattern: blue junction empty, both colors waiting at S-1.
    const std::size_t left = m.r.prev(m.s);
    return !m.b.test(m.s) && m.r.test(left) && m.b.test(left);
}

StructureReport stable_structure_report(const NormalizedState& m) {
    if (!structure_hypothesis_holds(m))
        throw HypothesisNotMet("junction is not at an arriving red/blue overlap with an empty blue junction");
    const std::size_t n = m.n;
    // Rotated frame: place j is physical (s + j) mod n, so the junction is place 0.
    auto R = [&](std::size_t j) { return m.r.test((m.s + j) % n); };
    auto B = [&](std::size_t j) { return m.b.test((m.s + j) % n); };

    StructureReport rep;
    const std::size_t left = m.r.prev(m.s);
    rep.s_r = m.r.run_ending_at(left);
    rep.s_b = m.b.run_ending_at(left);
    rep.m = std::min(rep.s_r, rep.s_b);
    rep.big_m = std::max(rep.s_r, rep.s_b);
    const std::size_t big_m = rep.big_m;
    const std::size_t small_m = rep.m;

    if (big_m + 1 >= n) {
        rep.checks.push_back(check("window_fits", false, "overlap window covers the whole ring"));
        return rep;
    }

    // (i) the window [n-M, n-1] holds just the two runs.
    bool window_ok = true;
    for (std::size_t j = n - big_m; j < n; ++j) {
        window_ok &= R(j) == (j >= n - rep.s_r);
        window_ok &= B(j) == (j >= n - rep.s_b);
    }
    rep.checks.push_back(check("window_holds_only_the_two_runs", window_ok, ""));

    // (ii) place n-M-1 is empty.
    const std::size_t first = n - big_m - 1;
    rep.checks.push_back(check("place_left_of_window_empty", !R(first) && !B(first), ""));

    // (iii) scanning left from n-M-1 down to 0: single-color places following
    // the pattern empty, red run, blue run, empty, ... with complete runs >= m.
    bool single = true, order = true, lengths = true;
    std::ostringstream why;
    enum class Tok { Empty, Red, Blue };
    Tok prev_tok = Tok::Empty;
    std::size_t run = 0;
    for (std::size_t jj = first; jj-- > 0;) {
        const bool r = R(jj), b = B(jj);
        if (r && b) {
            single = false;
            why << "place " << jj << " holds both colors; ";
            break;
        }
        const Tok tok = r ? Tok::Red : b ? Tok::Blue : Tok::Empty;
        if (tok == prev_tok) {
            if (tok == Tok::Empty) {
                order = false;
                why << "two empty places at " << jj << "; ";
            }
            ++run;
            continue;
        }
        const bool legal = (prev_tok == Tok::Empty && tok == Tok::Red) ||
                           (prev_tok == Tok::Red && tok == Tok::Blue) ||
                           (prev_tok == Tok::Blue && tok == Tok::Empty);
        if (!legal) {
            order = false;
            why << "illegal transition at place " << jj << "; ";
        }
        if (prev_tok != Tok::Empty && run < small_m) {
            lengths = false;
            why << "run of " << run << " ending at place " << jj + 1 << "; ";
        }
        prev_tok = tok;
        run = 1;
    }
    // A red run reaching place 0 continues into the window's red run.
    if (single && prev_tok == Tok::Blue) {
        order = false;
        why << "blue run reaches the junction; ";
    }
    rep.checks.push_back(check("each_place_single_color", single, why.str()));
    rep.checks.push_back(check("empty_red_blue_alternation", order, why.str()));
    rep.checks.push_back(check("runs_at_least_m", lengths, why.str()));

    const SegmentStats seg = count_segments(m);
    rep.checks.push_back(check("red_segments_equal_blue_segments", seg.red_segments == seg.blue_segments,
                               std::to_string(seg.red_segments) + " vs " + std::to_string(seg.blue_segments)));

    const auto cars = static_cast<std::int64_t>(m.r.count() + m.b.count());
    const auto nn = static_cast<std::int64_t>(n);
    const auto mm = static_cast<std::int64_t>(small_m);
    rep.checks.push_back(check("cars_at_most_n_plus_m", cars <= nn + mm,
                               std::to_string(cars) + " <= " + std::to_string(nn + mm)));
    rep.checks.push_back(check("cars_at_least_lower_bound", cars * (2 * mm + 1) >= 2 * mm * nn + mm * (2 * mm + 1),
                               "cars=" + std::to_string(cars) + " m=" + std::to_string(mm)));
    const auto big = static_cast<std::int64_t>(rep.big_m);
    const std::int64_t max_groups = (nn - big + 2 * mm) / (2 * mm + 1);
    rep.checks.push_back(check("cars_at_least_group_bound", cars >= nn + mm - max_groups,
                               "cars=" + std::to_string(cars) + " groups<=" + std::to_string(max_groups)));
    rep.checks.push_back(check("segments_at_most_n_over_m_plus_1",
                               static_cast<std::int64_t>(seg.total_segments) * mm <= nn + mm,
                               std::to_string(seg.total_segments) + " segments"));
    rep.checks.push_back(check("violations_equal_m", violation_count(m) == small_m,
                               std::to_string(violation_count(m)) + " vs m=" + std::to_string(small_m)));
    return rep;
}

std::vector<std::pair<std::uint64_t, StructureReport>> structure_reports_over_period(const CycleReport& cycle) {
    std::vector<std::pair<std::uint64_t, StructureReport>> out;
    for_each_arrival(cycle.entry, cycle.period, [&](std::uint64_t t, const NormalizedState& st) {
        out.emplace_back(t, stable_structure_report(st));
        return true;
    });
    return out;
}

std::vector<NamedCheck> theorem_checks(const CycleReport& cycle, const Rational& p) {
    std::vector<NamedCheck> out;
    const auto n = static_cast<std::int64_t>(cycle.entry.n);
    const auto cars = static_cast<std::int64_t>(cycle.entry.r.count() + cycle.entry.b.count());
    const Rational speed = cycle.speed_red;
    // Bounds use the realized density; the nominal p only labels the run.
    const Rational density(cars, 2 * n);
    const std::string tag = "p=" + fmt(p) + " speed=" + fmt(speed);

    out.push_back(check("equal_speeds", cycle.speed_red == cycle.speed_blue,
                        fmt(cycle.speed_red) + " vs " + fmt(cycle.speed_blue)));
    const Rational bound = cars <= n ? Rational(1) : Rational(n, cars);
    out.push_back(check("speed_at_most_optimal", speed <= bound, tag + " bound=" + fmt(bound)));
    const Rational from_violations(n, n + static_cast<std::int64_t>(cycle.violations_on_cycle));
    out.push_back(check("speed_at_least_violation_bound", speed >= from_violations,
                        tag + " bound=" + fmt(from_violations)));

    const SegmentStats seg = count_segments(cycle.entry);
    if (cars == 0) return out;

    if (density * 2 < 1) {
        const std::int64_t c = c_of_p(density);
        out.push_back(check("speed_at_least_1_minus_C_over_n", speed >= Rational(1) - Rational(c, n),
                            tag + " C=" + std::to_string(c)));
        if (density * 3 < 1) out.push_back(check("speed_exactly_1", speed == Rational(1), tag));
        if (cycle.m_min_block > 0)
            out.push_back(check("m_at_most_C", static_cast<std::int64_t>(cycle.m_min_block) <= c,
                                "m=" + std::to_string(cycle.m_min_block)));
    } else if (density * 2 > 1) {
        const IntInterval mb = m_bounds_grouped(n, cars);
        const Rational k = Rational(mb.hi) - (density * 2 - 1) * n;
        const Rational lower = Rational(1) / (density * 2) - k / n;
        out.push_back(check("speed_near_optimal", lower <= speed && speed <= Rational(1) / (density * 2),
                            tag + " lower=" + fmt(lower)));
        out.push_back(check("segments_bounded",
                            Rational(static_cast<std::int64_t>(seg.total_segments)) * (density * 2 - 1) <= density * 2,
                            std::to_string(seg.total_segments) + " segments"));
        out.push_back(check("m_within_bounds", mb.contains(static_cast<std::int64_t>(cycle.m_min_block)),
                            "m=" + std::to_string(cycle.m_min_block) + " in [" + std::to_string(mb.lo) + "," +
                                std::to_string(mb.hi) + "]"));
    } else {
        // speed >= 1 - 1/sqrt(n)  <=>  (1 - speed)^2 n <= 1
        const Rational gap = Rational(1) - speed;
        const __int128 num = gap.numerator(), den = gap.denominator();
        out.push_back(check("speed_at_least_1_minus_inv_sqrt_n", num * num * n <= den * den, tag));
        // Counted per color: the stable state has as many red as blue segments.
        const auto segs = static_cast<std::int64_t>(std::max(seg.red_segments, seg.blue_segments));
        out.push_back(check("segments_per_color_at_most_sqrt_n", segs * segs <= n,
                            std::to_string(segs) + " segments per color"));
    }
    return out;
}

std::vector<NamedCheck> verify_theorem_suite(const NormalizedState& m0, const Rational& p, const CycleOptions& opts) {
    return theorem_checks(find_cycle(m0, opts), p);
}

}  // namespace bml
