#pragma once

#include "twistor/common.hpp"
#include "twistor/connection.hpp"
#include "twistor/errors.hpp"
#include "twistor/grassmannian.hpp"
#include "twistor/projective.hpp"
#include "twistor/quadric.hpp"
#include "twistor/twistor_map.hpp"
#include "twistor/io.hpp"
#include "twistor/verify.hpp"
