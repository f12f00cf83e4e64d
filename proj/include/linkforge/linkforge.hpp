#pragma once

#include "linkforge/compose.hpp"
#include "linkforge/errors.hpp"
#include "linkforge/invariants.hpp"
#include "linkforge/io.hpp"
#include "linkforge/laurent.hpp"
#include "linkforge/obstruct.hpp"
#include "linkforge/pdcode.hpp"
