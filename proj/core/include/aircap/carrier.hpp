#pragma once

#include <map>
#include <string>
#include <vector>

namespace aircap {

enum class CarrierClass : std::uint8_t {
    Legacy,
    Lcc,
    Fringe,
};

std::string to_string(CarrierClass c);
CarrierClass carrier_class_from_string(const std::string& s);

struct CarrierInfo {
    std::string code;
    CarrierClass klass = CarrierClass::Fringe;
    // Carriers that merged during the sample share one group id so fixed
    // effects and serving sets treat them as a single firm.
    std::string merger_group;
};

// Classification and merger mapping for ticketing carriers. Codes not
// registered are treated as fringe with themselves as merger group.
class CarrierRegistry {
public:
    // Registry preloaded with the standard network legacies and low cost
    // carriers; merger groups default to each carrier's own code.
    static CarrierRegistry standard();

    void add(CarrierInfo info);

    CarrierClass klass(const std::string& code) const;
    const std::string& merger_group(const std::string& code) const;
    bool is_legacy(const std::string& code) const { return klass(code) == CarrierClass::Legacy; }
    bool is_lcc(const std::string& code) const { return klass(code) == CarrierClass::Lcc; }

    std::vector<std::string> codes() const;

private:
    std::map<std::string, CarrierInfo> carriers_;
};

} // namespace aircap
