#include "shiftsim/logic.hpp"

namespace shiftsim {

char to_char(LogicValue v) {
    switch (v) {
    case L0: return '0';
    case L1: return '1';
    case LX: return 'x';
    case LZ: return 'z';
    }
    return '?';
}

std::optional<LogicValue> logic_from_char(char c) {
    switch (c) {
    case '0': return L0;
    case '1': return L1;
    case 'x': case 'X': return LX;
    case 'z': case 'Z': return LZ;
    default: return std::nullopt;
    }
}

LogicValue lnot(LogicValue a) {
    a = as_input(a);
    if (a == L0) return L1;
    if (a == L1) return L0;
    return LX;
}

LogicValue land(LogicValue a, LogicValue b) {
    a = as_input(a);
    b = as_input(b);
    if (a == L0 || b == L0) return L0; // controlling value
    if (a == LX || b == LX) return LX;
    return L1;
}

LogicValue lor(LogicValue a, LogicValue b) {
    a = as_input(a);
    b = as_input(b);
    if (a == L1 || b == L1) return L1; // controlling value
    if (a == LX || b == LX) return LX;
    return L0;
}

LogicValue lxor(LogicValue a, LogicValue b) {
    a = as_input(a);
    b = as_input(b);
    if (a == LX || b == LX) return LX; // no controlling value
    return a == b ? L0 : L1;
}

LogicValue resolve(std::span<const LogicValue> drivers) {
    LogicValue acc = LZ;
    for (LogicValue d : drivers) {
        if (d == LZ) continue;
        if (d == LX) return LX;
        if (acc == LZ) {
            acc = d;
        } else if (acc != d) {
            return LX; // two distinct strong drivers short
        }
    }
    return acc;
}

Word4 Word4::from_uint(unsigned v) {
    Word4 w;
    for (int i = 0; i < 4; ++i)
        w.bits[i] = ((v >> (3 - i)) & 1u) ? L1 : L0;
    return w;
}

std::optional<Word4> Word4::parse(std::string_view s) {
    if (s.size() != 4) return std::nullopt;
    Word4 w;
    for (int i = 0; i < 4; ++i) {
        auto v = logic_from_char(s[static_cast<std::size_t>(i)]);
        if (!v) return std::nullopt;
        w.bits[static_cast<std::size_t>(i)] = *v;
    }
    return w;
}

std::optional<unsigned> Word4::to_uint() const {
    unsigned v = 0;
    for (int i = 0; i < 4; ++i) {
        if (!is_strong(bits[static_cast<std::size_t>(i)])) return std::nullopt;
        v = (v << 1) | (bits[static_cast<std::size_t>(i)] == L1 ? 1u : 0u);
    }
    return v;
}

std::string Word4::str() const {
    std::string s(4, '?');
    for (int i = 0; i < 4; ++i) s[static_cast<std::size_t>(i)] = to_char(bits[static_cast<std::size_t>(i)]);
    return s;
}

bool Word4::all_strong() const {
    for (auto b : bits)
        if (!is_strong(b)) return false;
    return true;
}

} // namespace shiftsim
