#pragma once

#include <stdexcept>
#include <string>

namespace aoi {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
public:
    using Error::Error;
};

// Traffic intensity too high for a result that needs a stable queue.
class Unstable : public Error {
public:
    using Error::Error;
};

// E[A_peak] <= E[D]: no informative throughput.
class DegenerateThroughput : public Error {
public:
    using Error::Error;
};

// Pr(G < H) in {0, 1}, or G and H share an atom.
class DegenerateRace : public Error {
public:
    using Error::Error;
};

class NotAbsolutelyContinuous : public Error {
public:
    using Error::Error;
};

class InsufficientPath : public Error {
public:
    using Error::Error;
};

class InvalidConfig : public Error {
public:
    using Error::Error;
};

// No closed form for this model and discipline.
class Unsupported : public Error {
public:
    using Error::Error;
};

class UnknownFigure : public Error {
public:
    using Error::Error;
};

}  // namespace aoi
