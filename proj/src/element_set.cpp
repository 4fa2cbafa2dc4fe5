#include "matchfree/element_set.hpp"

#include <stdexcept>

namespace matchfree {

ElementSet::ElementSet(std::initializer_list<int> elements)
    : ElementSet(from_elements(std::span<const int>(elements.begin(), elements.size()))) {}

ElementSet ElementSet::from_elements(std::span<const int> elements) {
    Mask bits = 0;
    for (int e : elements) {
        if (e < 1 || e > kMaxGround) throw std::out_of_range("element out of range: " + std::to_string(e));
        bits |= Mask{1} << (e - 1);
    }
    return ElementSet(bits);
}

std::vector<int> ElementSet::elements() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(size()));
    for (Mask b = bits_; b != 0; b &= b - 1) out.push_back(std::countr_zero(b) + 1);
    return out;
}

std::string ElementSet::to_string() const {
    std::string out = "{";
    bool first = true;
    for (int e : elements()) {
        if (!first) out += ',';
        out += std::to_string(e);
        first = false;
    }
    return out + "}";
}

}  // namespace matchfree
