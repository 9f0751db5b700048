#ifndef CAUSALDNA_COMMON_HPP
#define CAUSALDNA_COMMON_HPP

#include <stdexcept>
#include <string>

namespace causaldna {

class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

class capacity_error : public std::length_error {
public:
    explicit capacity_error(const std::string& what) : std::length_error(what) {}
};

class io_error : public std::runtime_error {
public:
    explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace causaldna

#endif  // CAUSALDNA_COMMON_HPP
