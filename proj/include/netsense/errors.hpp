#ifndef NETSENSE_ERRORS_HPP
#define NETSENSE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace netsense {

/// Base class for every failure raised by the library. The CLI maps these to exit code 1.
class Error : public std::runtime_error
{
public:
	using std::runtime_error::runtime_error;
};

/// A numeric precondition was violated (non-positive range, empty sequence, ...).
class DomainError : public Error
{
public:
	using Error::Error;
};

/// A parameter combination is invalid (cp_length >= N, exclusion window too wide, ...).
class ParameterError : public Error
{
public:
	using Error::Error;
};

class InvalidRootError : public ParameterError
{
public:
	using ParameterError::ParameterError;
};

/// Anchors are collinear or otherwise cannot fix a position.
class GeometryError : public Error
{
public:
	using Error::Error;
};

class DegenerateInputError : public GeometryError
{
public:
	using GeometryError::GeometryError;
};

class NoIntersectionError : public GeometryError
{
public:
	using GeometryError::GeometryError;
};

class BehindRayError : public GeometryError
{
public:
	using GeometryError::GeometryError;
};

class NotSupportedError : public Error
{
public:
	using Error::Error;
};

class GenerationError : public Error
{
public:
	using Error::Error;
};

class InconsistentMeasurementError : public Error
{
public:
	using Error::Error;
};

/// No association hypothesis met the feasibility tolerance.
class InfeasibleError : public Error
{
public:
	InfeasibleError(const std::string& what, double best_residual_m)
		: Error(what), best_residual_m_(best_residual_m) {}

	[[nodiscard]] double best_residual() const noexcept { return best_residual_m_; }

private:
	double best_residual_m_;
};

class IoError : public Error
{
public:
	using Error::Error;
};

}

#endif
