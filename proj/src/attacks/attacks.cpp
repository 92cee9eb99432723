#include "shadowforge/attacks/attacks.hpp"

namespace shadowforge {

std::string attack_method_name(AttackMethod m) {
  switch (m) {
    case AttackMethod::Fgsm: return "fgsm";
    case AttackMethod::Bim: return "bim";
    case AttackMethod::Pgd: return "pgd";
  }
  throw InvalidInput("attack_method_name: bad enum value");
}

AttackMethod parse_attack_method(const std::string& name) {
  if (name == "fgsm") return AttackMethod::Fgsm;
  if (name == "bim") return AttackMethod::Bim;
  if (name == "pgd") return AttackMethod::Pgd;
  throw InvalidInput("unknown attack method \"" + name + "\"");
}

}  // namespace shadowforge
