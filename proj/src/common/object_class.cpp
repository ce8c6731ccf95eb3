#include "pap/common/object_class.hpp"

#include "pap/common/errors.hpp"

#include <string>

namespace pap {

std::string_view to_string(ObjectClass c) noexcept {
  switch (c) {
    case ObjectClass::Car: return "car";
    case ObjectClass::Pedestrian: return "pedestrian";
    case ObjectClass::Bicycle: return "bicycle";
    case ObjectClass::Bus: return "bus";
    case ObjectClass::Motor: return "motor";
    case ObjectClass::Trailer: return "trailer";
    case ObjectClass::Truck: return "truck";
  }
  return "unknown";
}

ObjectClass class_from_string(std::string_view name) {
  for (ObjectClass c : kAllClasses) {
    if (to_string(c) == name) return c;
  }
  throw ConfigError("class", "unknown object class '" + std::string(name) + "'");
}

}  // namespace pap
