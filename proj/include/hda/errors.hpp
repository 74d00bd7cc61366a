// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace hda {

// Precondition on a numeric argument violated (angle out of range, empty set, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Shapes or structural constraints of a matrix do not fit the architecture.
class StructuralError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Precoder contract violated by the caller (e.g. BST with p != 1).
class ContractError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A UE whose effective channel row vanishes cannot be served by MRT.
class DegenerateUeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SingularityError : public std::runtime_error {
public:
    SingularityError(const std::string& what, double condition_number)
        : std::runtime_error(what), condition_number_(condition_number) {}
    double condition_number() const noexcept { return condition_number_; }

private:
    double condition_number_;
};

class SchedulingError : public std::runtime_error {
public:
    SchedulingError(const std::string& what, double achieved_separation_rad)
        : std::runtime_error(what), achieved_separation_(achieved_separation_rad) {}
    // Smallest pairwise AoD separation among the UEs that could be selected.
    double achieved_separation() const noexcept { return achieved_separation_; }

private:
    double achieved_separation_;
};

// PA driven beyond its saturation output power.
class SaturationError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& key, const std::string& what)
        : std::runtime_error(key.empty() ? what : key + ": " + what), key_(key) {}
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace hda
