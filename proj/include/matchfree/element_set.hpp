#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace matchfree {

inline constexpr int kMaxGround = 30;

/// A subset of [n] stored as a bitmask. Element e (1-based) lives at bit e-1.
class ElementSet {
public:
    using Mask = std::uint32_t;

    constexpr ElementSet() = default;
    constexpr explicit ElementSet(Mask bits) : bits_(bits) {}
    ElementSet(std::initializer_list<int> elements);

    static ElementSet from_elements(std::span<const int> elements);
    /// [1..n]
    static constexpr ElementSet full(int n) {
        return ElementSet(n >= 32 ? ~Mask{0} : ((Mask{1} << n) - 1));
    }

    constexpr Mask bits() const { return bits_; }
    constexpr int size() const { return std::popcount(bits_); }
    constexpr bool empty() const { return bits_ == 0; }
    constexpr bool contains(int element) const { return (bits_ >> (element - 1)) & 1u; }
    constexpr bool subset_of(ElementSet other) const { return (bits_ & ~other.bits_) == 0; }
    constexpr bool disjoint(ElementSet other) const { return (bits_ & other.bits_) == 0; }
    /// True when no element above n is present.
    constexpr bool fits(int n) const { return (bits_ & ~full(n).bits_) == 0; }

    constexpr ElementSet with(int element) const { return ElementSet(bits_ | (Mask{1} << (element - 1))); }
    constexpr ElementSet without(int element) const { return ElementSet(bits_ & ~(Mask{1} << (element - 1))); }

    friend constexpr ElementSet operator|(ElementSet a, ElementSet b) { return ElementSet(a.bits_ | b.bits_); }
    friend constexpr ElementSet operator&(ElementSet a, ElementSet b) { return ElementSet(a.bits_ & b.bits_); }
    friend constexpr bool operator==(ElementSet, ElementSet) = default;
    friend constexpr auto operator<=>(ElementSet a, ElementSet b) { return a.bits_ <=> b.bits_; }

    /// Ascending 1-based elements.
    std::vector<int> elements() const;
    /// "{1,2,5}"
    std::string to_string() const;

private:
    Mask bits_ = 0;
};

/// Orders by (size, bitmask); the canonical order of the family writer.
struct SizeThenMask {
    bool operator()(ElementSet a, ElementSet b) const {
        const int sa = a.size(), sb = b.size();
        return sa != sb ? sa < sb : a.bits() < b.bits();
    }
};

}  // namespace matchfree

template <>
struct std::hash<matchfree::ElementSet> {
    std::size_t operator()(matchfree::ElementSet s) const noexcept { return std::hash<std::uint32_t>{}(s.bits()); }
};
