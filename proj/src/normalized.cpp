#include "bml/normalized.hpp"

#include <cassert>
#include <string>

#include "bml/errors.hpp"

namespace bml {

NormalizedState normalized_from_cars(std::size_t n, std::span<const std::size_t> red,
                                     std::span<const std::size_t> blue) {
    if (n == 0) throw DomainError("junction length must be positive");
    return normalized_from_cars(n, red, blue, n - 1);
}

NormalizedState normalized_from_cars(std::size_t n, std::span<const std::size_t> red,
                                     std::span<const std::size_t> blue, std::size_t s) {
    if (n == 0) throw DomainError("junction length must be positive");
    if (s >= n) throw IndexOutOfRange("junction pointer out of range");
    NormalizedState m{n, BitRing(n), BitRing(n), s};
    for (auto i : red) {
        if (i >= n) throw IndexOutOfRange("red position " + std::to_string(i) + " out of range");
        m.r.set(i);
    }
    for (auto i : blue) {
        if (i >= n) throw IndexOutOfRange("blue position " + std::to_string(i) + " out of range");
        m.b.set(i);
    }
    if (m.r.test(s) && m.b.test(s)) throw JunctionDoublyOccupied("junction holds both a red and a blue car");
    return m;
}

NormalizedState to_normalized(const DirectState& d) {
    const std::size_t n = d.n;
    NormalizedState m{n, BitRing(n), BitRing(n), n - 1};
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = i + 1 == n ? 0 : i + 1;
        m.r.assign(i, d.row.test(j));
        m.b.assign(i, d.col.test(j));
    }
    return m;
}

DirectState from_normalized(const NormalizedState& m) {
    const std::size_t n = m.n;
    DirectState d{n, BitRing(n), BitRing(n)};
    // Normalized place i sits at direct index i - s.
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = i >= m.s ? i - m.s : i + n - m.s;
        d.row.assign(j, m.r.test(i));
        d.col.assign(j, m.b.test(i));
    }
    return d;
}

PushEvent normalized_step_inplace(NormalizedState& m) {
    PushEvent ev;
    const std::size_t s = m.s;
    const std::size_t left = m.r.prev(s);
    if (m.r.test(left)) {
        BitRing* pushed = nullptr;
        if (m.b.test(s)) {
            pushed = &m.r;
            ev.kind = PushKind::RedPushed;
        } else if (m.b.test(left)) {
            pushed = &m.b;
            ev.kind = PushKind::BluePushed;
        }
        if (pushed) {
            const std::size_t hole = pushed->find_prev_zero(left);
            assert(hole != m.n);
            pushed->reset(left);
            pushed->set(hole);
            ev.vacated_index = left;
            ev.filled_index = hole;
        }
    }
    m.s = left;
    return ev;
}

std::pair<NormalizedState, PushEvent> normalized_step(const NormalizedState& m) {
    NormalizedState next = m;
    const PushEvent ev = normalized_step_inplace(next);
    return {std::move(next), ev};
}

ViolationSet violations(const NormalizedState& m) {
    ViolationSet v;
    v.x.assign(m.n, false);
    for (std::size_t i = 0; i < m.n; ++i) {
        const std::size_t p = m.r.prev(i);
        if (!m.r.test(p)) continue;
        if (m.b.test(i)) {
            v.v_r.push_back(i);
            v.x[i] = true;
        } else if (m.b.test(p)) {
            v.v_b.push_back(i);
            v.x[i] = true;
        }
    }
    return v;
}

std::size_t violation_count(const NormalizedState& m) {
    // Place i is a violation iff R[i-1] and (B[i] or B[i-1]).
    BitRing r_shift = m.r;
    r_shift.rotate_up();
    BitRing b_shift = m.b;
    b_shift.rotate_up();
    const auto rw = r_shift.words();
    const auto bw = b_shift.words();
    const auto b0 = m.b.words();
    std::size_t c = 0;
    for (std::size_t w = 0; w < rw.size(); ++w)
        c += static_cast<std::size_t>(std::popcount(rw[w] & (b0[w] | bw[w])));
    return c;
}

bool is_free_flowing(const NormalizedState& m) {
    bool ok = true;
    for (std::size_t i = 0; i < m.n && ok; ++i) {
        if (m.r.test(i) && m.b.test(i)) ok = false;                // two cars in one place
        if (m.b.test(i) && m.r.test(m.r.prev(i))) ok = false;     // red just left of a blue
    }
    assert(ok == (violation_count(m) == 0));
    return ok;
}

std::size_t gap_count(const NormalizedState& m, std::size_t k) {
    if (k < 2 || k > m.n) throw DomainError("gap_count window must satisfy 2 <= k <= n");
    const std::size_t n = m.n;
    // Length of the empty stretch ending at each place, computed cyclically.
    std::size_t start = n;
    for (std::size_t i = 0; i < n; ++i)
        if (m.r.test(i) || m.b.test(i)) start = i;
    if (start == n) return n;  // fully empty ring: every window qualifies
    std::size_t count = 0, run = 0;
    for (std::size_t step = 1; step <= n; ++step) {
        const std::size_t i = (start + step) % n;
        run = (m.r.test(i) || m.b.test(i)) ? 0 : run + 1;
        if (run >= k) ++count;
    }
    return count;
}

PushEvent ViolationTracker::step(NormalizedState& m) {
    const PushEvent ev = normalized_step_inplace(m);
    if (ev.kind == PushKind::None) return ev;
    // X(i) depends on places i-1 and i, so a change at j touches X(j) and X(j+1).
    const std::size_t n = m.n;
    const std::size_t touched[4] = {ev.vacated_index, (ev.vacated_index + 1) % n, ev.filled_index,
                                    (ev.filled_index + 1) % n};
    BitRing& ring = ev.kind == PushKind::RedPushed ? m.r : m.b;
    auto toggle = [&] {
        ring.assign(ev.vacated_index, !ring.test(ev.vacated_index));
        ring.assign(ev.filled_index, !ring.test(ev.filled_index));
    };
    bool now[4];
    for (int a = 0; a < 4; ++a) now[a] = is_violation(m, touched[a]);
    toggle();
    for (int a = 0; a < 4; ++a) {
        bool dup = false;
        for (int c = 0; c < a; ++c) dup |= touched[c] == touched[a];
        if (dup) continue;
        const bool was = is_violation(m, touched[a]);
        if (was && !now[a]) --count_;
        if (!was && now[a]) ++count_;
    }
    toggle();
    return ev;
}

}  // namespace bml
