#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace pap {

/// The seven tracked categories, in report order.
enum class ObjectClass : std::uint8_t { Car, Pedestrian, Bicycle, Bus, Motor, Trailer, Truck };

inline constexpr std::array<ObjectClass, 7> kAllClasses = {
    ObjectClass::Car,   ObjectClass::Pedestrian, ObjectClass::Bicycle, ObjectClass::Bus,
    ObjectClass::Motor, ObjectClass::Trailer,    ObjectClass::Truck};

std::string_view to_string(ObjectClass c) noexcept;

/// Throws pap::ConfigError on unknown names.
ObjectClass class_from_string(std::string_view name);

}  // namespace pap
