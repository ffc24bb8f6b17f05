#pragma once

#include "hexcdnl/builtins.hpp"
#include "hexcdnl/cdnl.hpp"
#include "hexcdnl/core.hpp"
#include "hexcdnl/encoding.hpp"
#include "hexcdnl/external.hpp"
#include "hexcdnl/generators.hpp"
#include "hexcdnl/ground.hpp"
#include "hexcdnl/guessing.hpp"
#include "hexcdnl/hexeval.hpp"
#include "hexcdnl/parser.hpp"
#include "hexcdnl/source.hpp"
#include "hexcdnl/ufs.hpp"
