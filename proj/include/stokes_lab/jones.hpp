#pragma once

#include <Eigen/Core>

// Jones-type mode matrices shared by the Fock and linearized engines. Every
// matrix acts on a column of destruction operators: a_out = M a_in.
namespace stokes_lab::jones {

/// Polarization rotation through `angle` (radians): [[cos, sin], [-sin, cos]].
Eigen::Matrix2cd rotation(double angle);

/// The 45 degree rotation into the primed axes.
Eigen::Matrix2cd rotation45();

enum class WavePlateAxis { x, y };

/// Quarter-wave plate with its fast axis along x (diag(1, -i)) or y (diag(-i, 1)).
/// The x-axis plate followed by rotation45() reproduces s3_analyzer().
Eigen::Matrix2cd quarter_wave_plate(WavePlateAxis fast_axis = WavePlateAxis::x);

/// Quarter-wave plate plus 45 degree rotation as one matrix:
/// a_x' = (a_x - i a_y)/sqrt2, a_y' = -(a_x + i a_y)/sqrt2.
Eigen::Matrix2cd s3_analyzer();

/// Ideal polarizing beam splitter with axes along the primed directions.
/// Inputs (a_x', a_y', b_x', b_y'), outputs (c_x', c_y', d_x', d_y'):
/// x' is transmitted and y' reflected, so d_x' = a_x', c_y' = a_y', c_x' = b_x', d_y' = b_y'.
Eigen::Matrix4cd polarizing_beam_splitter();

/// Lossless two-port splitter on (a, b) -> (c, d):
/// c = sqrt(T) a + e^{i phase} sqrt(1-T) b, d = sqrt(1-T) a - e^{i phase} sqrt(T) b.
Eigen::Matrix2cd beam_splitter(double transmittance, double phase);

/// 50/50 splitter with the pi/2 phase on the b input: c = (a + i b)/sqrt2, d = (a - i b)/sqrt2.
Eigen::Matrix2cd epr_beam_splitter();

/// Frobenius norm of M^dagger M - I.
double unitarity_residual(const Eigen::MatrixXcd& m);

}  // namespace stokes_lab::jones
