#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace rhombus {

// Reserved colors (blank, fresh) live in their own namespace so they can never
// collide with a user alphabet. In text form they carry a leading '$'.
enum class ColorKind : std::uint8_t { User, Reserved };

struct Color {
    ColorKind kind = ColorKind::User;
    std::string name;

    friend bool operator==(const Color&, const Color&) = default;
    friend auto operator<=>(const Color&, const Color&) = default;

    std::string label() const { return kind == ColorKind::Reserved ? "$" + name : name; }

    static Color user(std::string name) { return {ColorKind::User, std::move(name)}; }
    static Color reserved(std::string name) { return {ColorKind::Reserved, std::move(name)}; }
    static Color parse(std::string_view text) {
        if (!text.empty() && text.front() == '$') return reserved(std::string(text.substr(1)));
        return user(std::string(text));
    }
};

using Palette = std::vector<Color>;
using ColorId = std::int32_t;
inline constexpr ColorId kNoColor = -1;
using EdgeColors = std::array<ColorId, 4>;
inline constexpr EdgeColors kUncolored{kNoColor, kNoColor, kNoColor, kNoColor};

}  // namespace rhombus
