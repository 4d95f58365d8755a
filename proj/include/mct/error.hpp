#pragma once

#include <stdexcept>
#include <string>

namespace mct {

class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Malformed encoded image.
class DecodeError : public Error
{
public:
    using Error::Error;
};

class UnsupportedFormatError : public Error
{
public:
    using Error::Error;
};

class InvalidChannelError : public Error
{
public:
    using Error::Error;
};

class InvalidValueError : public Error
{
public:
    using Error::Error;
};

class ShapeError : public Error
{
public:
    using Error::Error;
};

class ConfigError : public Error
{
public:
    using Error::Error;
};

// Malformed MCPM grid or architecture file.
class FormatError : public Error
{
public:
    using Error::Error;
};

// Caller broke a precondition (index out of range and similar).
class ContractError : public Error
{
public:
    using Error::Error;
};

} // namespace mct
