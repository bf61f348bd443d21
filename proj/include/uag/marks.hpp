#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace uag {

// Out-degree sequence (b_1..b_h) of a potential copy; b_1 = 0, sum = e(H).
using MarkSequence = std::vector<std::uint32_t>;

// F-number of a sequence of naturals: entries equal to 1 score 0, zeros score
// -2, every other entry scores itself.
inline std::int64_t f_number(const MarkSequence& a) {
    std::int64_t f = 0;
    for (std::uint32_t x : a) {
        if (x == 0)
            f -= 2;
        else if (x > 1)
            f += static_cast<std::int64_t>(x);
    }
    return f;
}

// One mass shift: b[from] loses 1, b[to] gains 1 (indices 1-based, to < from).
struct MarkMove {
    std::uint32_t from = 0;
    std::uint32_t to = 0;
};

struct MarkReduction {
    MarkSequence initial;
    MarkSequence final_marks;
    std::vector<MarkMove> moves;
};

// Canonical left-shift of a mark sequence (b_1..b_h), b_1 = 0.  Round one
// drains b_h down to 2, each unit landing on the rightmost zero among
// i != 1.  Round p >= 2 fires only when the tail is already (1,...,1,2): it
// drains b_{h-p+1} down to 1 the same way.  Stops when no zero is left or no
// entry qualifies.  Total mass is preserved and every move shifts mass left,
// so the tail-weight sum S can only grow.
inline MarkReduction reduce_mark_sequence(MarkSequence b) {
    if (b.empty()) throw std::invalid_argument("empty mark sequence");
    const std::size_t h = b.size();
    MarkReduction r;
    r.initial = b;
    if (b[0] != 0) throw std::invalid_argument("mark sequence must start with 0");

    auto last_zero = [&]() -> std::size_t {
        for (std::size_t i = h; i >= 2; --i)
            if (b[i - 1] == 0) return i;
        return 0;
    };

    if (h >= 2) {
        // round 1: source b_h, floor 2
        while (b[h - 1] > 2) {
            const std::size_t z = last_zero();
            if (z == 0) break;
            --b[h - 1];
            ++b[z - 1];
            r.moves.push_back({static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(z)});
        }
        // round p: source b_q with q = h-p+1, fires under tail (1,..,1,2)
        if (b[h - 1] == 2) {
            for (std::size_t q = h - 1; q >= 2; --q) {
                if (b[q - 1] == 1) continue;   // tail extends; next q
                if (b[q - 1] < 1) break;       // a zero in the tail stops everything
                while (b[q - 1] > 1) {
                    const std::size_t z = last_zero();
                    if (z == 0) break;
                    --b[q - 1];
                    ++b[z - 1];
                    r.moves.push_back({static_cast<std::uint32_t>(q), static_cast<std::uint32_t>(z)});
                }
                if (b[q - 1] > 1) break;  // zeros exhausted
            }
        }
    }
    r.final_marks = std::move(b);
    return r;
}

}  // namespace uag
