/*******************************************************************************
 * Copyright (c) 2026 compass-vqe contributors.                                *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#pragma once

#include "compass/ansatz.hpp"
#include "compass/driver.hpp"
#include "compass/errors.hpp"
#include "compass/fcidump.hpp"
#include "compass/fermion_ops.hpp"
#include "compass/jordan_wigner.hpp"
#include "compass/noise.hpp"
#include "compass/optimizer.hpp"
#include "compass/oracle.hpp"
#include "compass/parallel.hpp"
#include "compass/pauli.hpp"
#include "compass/protocol.hpp"
#include "compass/simulator.hpp"
#include "compass/vqe.hpp"
