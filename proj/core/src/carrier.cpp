#include "aircap/carrier.hpp"

#include "aircap/errors.hpp"

namespace aircap {

std::string to_string(CarrierClass c) {
    switch (c) {
        case CarrierClass::Legacy: return "legacy";
        case CarrierClass::Lcc: return "lcc";
        case CarrierClass::Fringe: return "fringe";
    }
    return "fringe";
}

CarrierClass carrier_class_from_string(const std::string& s) {
    if (s == "legacy") return CarrierClass::Legacy;
    if (s == "lcc") return CarrierClass::Lcc;
    if (s == "fringe") return CarrierClass::Fringe;
    throw SchemaError("unknown carrier class '" + s + "'");
}

CarrierRegistry CarrierRegistry::standard() {
    CarrierRegistry r;
    for (const char* code : {"AS", "AA", "CO", "DL", "NW", "UA", "US"}) {
        r.add({code, CarrierClass::Legacy, code});
    }
    for (const char* code : {"FL", "B6", "WN", "NK"}) {
        r.add({code, CarrierClass::Lcc, code});
    }
    return r;
}

void CarrierRegistry::add(CarrierInfo info) {
    if (info.merger_group.empty()) info.merger_group = info.code;
    carriers_[info.code] = std::move(info);
}

CarrierClass CarrierRegistry::klass(const std::string& code) const {
    auto it = carriers_.find(code);
    return it == carriers_.end() ? CarrierClass::Fringe : it->second.klass;
}

const std::string& CarrierRegistry::merger_group(const std::string& code) const {
    auto it = carriers_.find(code);
    return it == carriers_.end() ? code : it->second.merger_group;
}

std::vector<std::string> CarrierRegistry::codes() const {
    std::vector<std::string> out;
    out.reserve(carriers_.size());
    for (const auto& [code, info] : carriers_) out.push_back(code);
    return out;
}

} // namespace aircap
