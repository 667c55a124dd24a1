#ifndef VOTERLAB_GEOMETRY_HPP
#define VOTERLAB_GEOMETRY_HPP

//! \file geometry.hpp
//! Rhombic L x L box in the triangular lattice.
//!
//! Sites are integer pairs (i, j) in {0..L-1}^2. The six neighbours of (i, j) are
//! (i +- 1, j), (i, j +- 1), (i + 1, j - 1) and (i - 1, j + 1). The planar
//! embedding maps (i, j) to i * (1, 0) + j * (1/2, sqrt(3)/2), so every
//! lattice edge has length 1 and the box is a rhombus with 60 degree angles at
//! the SW and NE corners.
//!
//! Boundary sides, clockwise from the SW corner:
//!   west  = {i = 0,   0 <= j <= L-2}   vote 0
//!   north = {j = L-1, 0 <= i <= L-2}   vote 0
//!   east  = {i = L-1, 1 <= j <= L-1}   vote 1
//!   south = {j = 0,   1 <= i <= L-1}   vote 1
//! The two places where the boundary changes colour are the SW corner (0,0)
//! and the NE corner (L-1,L-1).

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "error.hpp"

namespace voterlab {

using Vote = std::uint8_t;

struct Site {
    int i = 0;
    int j = 0;

    friend constexpr bool operator==(const Site&, const Site&) = default;
    friend constexpr auto operator<=>(const Site&, const Site&) = default;
};

inline std::string to_string(const Site& s) {
    return "(" + std::to_string(s.i) + "," + std::to_string(s.j) + ")";
}

struct PlanarPoint {
    double x = 0.0;
    double y = 0.0;
};

inline double distance(const PlanarPoint& a, const PlanarPoint& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

inline constexpr double kSqrt3 = 1.7320508075688772;

inline PlanarPoint embed(const Site& s) {
    return {s.i + 0.5 * s.j, 0.5 * kSqrt3 * s.j};
}

inline constexpr std::array<Site, 6> kNeighborOffsets{
    Site{1, 0}, Site{-1, 0}, Site{0, 1}, Site{0, -1}, Site{1, -1}, Site{-1, 1}};

enum class Side : std::uint8_t { west = 1, north = 2, east = 3, south = 4 };

inline const char* to_string(Side s) {
    switch (s) {
        case Side::west: return "west";
        case Side::north: return "north";
        case Side::east: return "east";
        case Side::south: return "south";
    }
    return "?";
}

struct BoundarySite {
    Side side;
    Vote vote;
};

class BoxGeometry {
  public:
    explicit BoxGeometry(int L) : L_(L) {
        if (L < 3) throw InvalidSizeError("box side length must be >= 3, got " + std::to_string(L));
        const auto n = static_cast<std::size_t>(L) * L;
        boundary_.assign(n, 0);
        fixed_vote_.assign(n, 0);
        for (int i = 0; i < L; ++i) {
            for (int j = 0; j < L; ++j) {
                const Site s{i, j};
                if (auto b = classify(s)) {
                    boundary_[index(s)] = 1;
                    fixed_vote_[index(s)] = b->vote;
                }
            }
        }
        for (std::size_t d = 0; d < kNeighborOffsets.size(); ++d) {
            offsets_[d] = kNeighborOffsets[d].i * L + kNeighborOffsets[d].j;
        }
    }

    int side_length() const noexcept { return L_; }
    int num_sites() const noexcept { return L_ * L_; }
    int num_interior() const noexcept { return (L_ - 2) * (L_ - 2); }
    int num_boundary() const noexcept { return 4 * (L_ - 1); }

    bool contains(const Site& s) const noexcept {
        return s.i >= 0 && s.j >= 0 && s.i < L_ && s.j < L_;
    }

    // Row-major in (i, j).
    int index(const Site& s) const noexcept { return s.i * L_ + s.j; }
    Site site(int idx) const noexcept { return {idx / L_, idx % L_}; }

    bool is_boundary(int idx) const noexcept { return boundary_[idx] != 0; }
    bool is_boundary(const Site& s) const { return boundary_[checked_index(s)] != 0; }
    bool is_interior(const Site& s) const { return !is_boundary(s); }

    // Fixed vote of a boundary site; 0 for interior sites.
    Vote fixed_vote(int idx) const noexcept { return fixed_vote_[idx]; }

    // Index displacement for neighbour direction d in [0, 6). Valid from interior sites.
    const std::array<int, 6>& index_offsets() const noexcept { return offsets_; }

    std::vector<Site> neighbors(const Site& s) const {
        checked_index(s);
        std::vector<Site> out;
        out.reserve(6);
        for (const auto& o : kNeighborOffsets) {
            const Site t{s.i + o.i, s.j + o.j};
            if (contains(t)) out.push_back(t);
        }
        return out;
    }

    // nullopt for interior sites.
    std::optional<BoundarySite> boundary_info(const Site& s) const {
        checked_index(s);
        return classify(s);
    }

    // Box centre; for even L the upper-right of the four central candidates.
    Site center() const noexcept {
        const int c = L_ / 2;  // == ceil((L-1)/2)
        return {c, c};
    }

    Site rotate180(const Site& s) const noexcept { return {L_ - 1 - s.i, L_ - 1 - s.j}; }

    Site sw_corner() const noexcept { return {0, 0}; }
    Site ne_corner() const noexcept { return {L_ - 1, L_ - 1}; }

    std::vector<Site> interior_sites() const {
        std::vector<Site> out;
        out.reserve(static_cast<std::size_t>(num_interior()));
        for (int i = 1; i < L_ - 1; ++i)
            for (int j = 1; j < L_ - 1; ++j) out.push_back({i, j});
        return out;
    }

    std::vector<Site> side_sites(Side side) const {
        std::vector<Site> out;
        for (int k = 0; k < L_ - 1; ++k) {
            switch (side) {
                case Side::west: out.push_back({0, k}); break;
                case Side::north: out.push_back({k, L_ - 1}); break;
                case Side::east: out.push_back({L_ - 1, k + 1}); break;
                case Side::south: out.push_back({k + 1, 0}); break;
            }
        }
        return out;
    }

  private:
    int checked_index(const Site& s) const {
        if (!contains(s)) {
            throw DomainError("site " + to_string(s) + " outside box of side " + std::to_string(L_));
        }
        return index(s);
    }

    std::optional<BoundarySite> classify(const Site& s) const noexcept {
        const int last = L_ - 1;
        if (s.i == 0 && s.j <= last - 1) return BoundarySite{Side::west, 0};
        if (s.j == last && s.i <= last - 1) return BoundarySite{Side::north, 0};
        if (s.i == last && s.j >= 1) return BoundarySite{Side::east, 1};
        if (s.j == 0 && s.i >= 1) return BoundarySite{Side::south, 1};
        return std::nullopt;
    }

    int L_;
    std::vector<std::uint8_t> boundary_;
    std::vector<Vote> fixed_vote_;
    std::array<int, 6> offsets_{};
};

inline BoxGeometry build_box(int L) { return BoxGeometry(L); }

}  // namespace voterlab

#endif  // VOTERLAB_GEOMETRY_HPP
