#include "cropsense/diagnosis.hpp"

#include <algorithm>
#include <cctype>
#include <string>

namespace cropsense {

std::string_view to_string(Diagnosis d) noexcept {
    switch (d) {
    case Diagnosis::CBB: return "CBB";
    case Diagnosis::CBSD: return "CBSD";
    case Diagnosis::CGM: return "CGM";
    case Diagnosis::CMD: return "CMD";
    case Diagnosis::None: return "None";
    }
    return "";
}

std::optional<Diagnosis> parse_diagnosis(std::string_view text) {
    std::string upper(text);
    std::transform(upper.begin(), upper.end(), upper.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    for (Diagnosis d : kDiagnoses) {
        std::string name(to_string(d));
        std::transform(name.begin(), name.end(), name.begin(),
                       [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
        if (upper == name) return d;
    }
    if (upper == "HEALTHY") return Diagnosis::None;
    return std::nullopt;
}

}  // namespace cropsense
