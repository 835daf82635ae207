#ifndef SHIFTSIM_LOGIC_HPP
#define SHIFTSIM_LOGIC_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>

namespace shiftsim {

// Library-wide error type. Structured errors (oscillation etc.) derive from it.
struct Error : std::runtime_error {
    explicit Error(const std::string &msg) : std::runtime_error(msg) {}
};

/// Four-valued signal state carried on every net.
/// L0/L1 are strong; X is unknown; Z is high-impedance (floating).
enum class LogicValue : std::uint8_t { L0 = 0, L1 = 1, X = 2, Z = 3 };

inline constexpr LogicValue L0 = LogicValue::L0;
inline constexpr LogicValue L1 = LogicValue::L1;
inline constexpr LogicValue LX = LogicValue::X;
inline constexpr LogicValue LZ = LogicValue::Z;

char to_char(LogicValue v);
std::optional<LogicValue> logic_from_char(char c);

inline bool is_strong(LogicValue v) { return v == L0 || v == L1; }

// Gate-input view: a floating input reads as unknown.
inline LogicValue as_input(LogicValue v) { return v == LZ ? LX : v; }

// Four-valued connectives with controlling-value shortcuts.
LogicValue lnot(LogicValue a);
LogicValue land(LogicValue a, LogicValue b);
LogicValue lor(LogicValue a, LogicValue b);
LogicValue lxor(LogicValue a, LogicValue b);

/// Multi-driver resolution. Total: empty or all-Z floats, a single
/// effective driver wins, conflicting strong drivers or any X give X.
/// Commutative and associative over the driver multiset.
LogicValue resolve(std::span<const LogicValue> drivers);

/// 4-bit vector, F1..F4 with F1 the MSB. Integer conversion is defined
/// only when all bits are strong.
struct Word4 {
    std::array<LogicValue, 4> bits{LX, LX, LX, LX}; // bits[0] = F1 (MSB)

    static Word4 from_uint(unsigned v);
    static std::optional<Word4> parse(std::string_view s); // e.g. "10x1"

    std::optional<unsigned> to_uint() const;
    std::string str() const;
    bool all_strong() const;

    LogicValue &operator[](std::size_t i) { return bits[i]; }
    LogicValue operator[](std::size_t i) const { return bits[i]; }
    bool operator==(const Word4 &) const = default;
};

} // namespace shiftsim

#endif
