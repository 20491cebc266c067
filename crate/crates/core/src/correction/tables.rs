//! Embedded factor data.
//!
//! Values are stored exactly as printed in their sources. Arrays indexed by
//! sample size start at n = 2.

/// Refined c_n for n = 2..=100 (reference implementation arrays).
pub(crate) const REFINED_SN: [f64; 99] = [
    0.7430, 1.8498, 0.9551, 1.3486, 0.9941, 1.1983, 1.0050, 1.1318, 1.0069, 1.0959,
    1.0063, 1.0742, 1.0051, 1.0601, 1.0038, 1.0501, 1.0028, 1.0430, 1.0022, 1.0374,
    1.0014, 1.0331, 1.0009, 1.0297, 1.0007, 1.0269, 1.0004, 1.0245, 1.0001, 1.0226,
    0.9999, 1.0209, 0.9997, 1.0195, 0.9998, 1.0183, 0.9996, 1.0172, 0.9997, 1.0162,
    0.9996, 1.0154, 0.9996, 1.0146, 0.9996, 1.0139, 0.9995, 1.0132, 0.9995, 1.0126,
    0.9995, 1.0123, 0.9995, 1.0117, 0.9995, 1.0113, 0.9996, 1.0109, 0.9996, 1.0105,
    0.9995, 1.0102, 0.9996, 1.0099, 0.9997, 1.0095, 0.9996, 1.0092, 0.9997, 1.0090,
    0.9997, 1.0088, 0.9996, 1.0085, 0.9997, 1.0084, 0.9997, 1.0081, 0.9997, 1.0079,
    0.9997, 1.0076, 0.9997, 1.0076, 0.9997, 1.0074, 0.9997, 1.0072, 0.9997, 1.0070,
    0.9997, 1.0069, 0.9997, 1.0067, 0.9998, 1.0066, 0.9997, 1.0065, 0.9998,
];

/// Refined d_n for n = 2..=100 (reference implementation arrays).
pub(crate) const REFINED_QN: [f64; 99] = [
    0.3995, 0.9939, 0.5133, 0.8441, 0.6122, 0.8589, 0.6700, 0.8736, 0.7201, 0.8890,
    0.7575, 0.9023, 0.7855, 0.9125, 0.8078, 0.9211, 0.8260, 0.9279, 0.8410, 0.9338,
    0.8537, 0.9389, 0.8644, 0.9430, 0.8737, 0.9468, 0.8819, 0.9501, 0.8890, 0.9530,
    0.8953, 0.9557, 0.9010, 0.9579, 0.9060, 0.9600, 0.9106, 0.9619, 0.9148, 0.9636,
    0.9185, 0.9652, 0.9220, 0.9667, 0.9252, 0.9680, 0.9281, 0.9692, 0.9309, 0.9704,
    0.9333, 0.9715, 0.9357, 0.9724, 0.9378, 0.9733, 0.9399, 0.9742, 0.9418, 0.9750,
    0.9435, 0.9757, 0.9453, 0.9765, 0.9469, 0.9771, 0.9484, 0.9777, 0.9498, 0.9784,
    0.9511, 0.9789, 0.9523, 0.9794, 0.9536, 0.9800, 0.9547, 0.9805, 0.9558, 0.9809,
    0.9568, 0.9814, 0.9578, 0.9818, 0.9587, 0.9822, 0.9597, 0.9826, 0.9605, 0.9829,
    0.9614, 0.9833, 0.9621, 0.9836, 0.9629, 0.9840, 0.9636, 0.9843, 0.9644,
];

/// Croux-Rousseeuw (1992) c_n for n = 2..=9.
pub(crate) const CROUX_SN: [f64; 8] = [0.743, 1.851, 0.954, 1.351, 0.993, 1.198, 1.005, 1.131];

/// Croux-Rousseeuw (1992) d_n for n = 2..=9.
pub(crate) const CROUX_QN: [f64; 8] = [0.399, 0.994, 0.512, 0.844, 0.611, 0.857, 0.669, 0.872];

/// robustbase 0.95-0 d_n for n = 2..=12.
pub(crate) const ROBUSTBASE_QN: [f64; 11] = [
    0.399356, 0.99365, 0.51321, 0.84401, 0.61220, 0.85877, 0.66993, 0.87344, 0.72014, 0.88906,
    0.75743,
];

/// Published Monte-Carlo factor table: `(n, c_n, d_n)`, dense for n <= 100
/// and sparse up to n = 10 000.
pub const PUBLISHED_FACTORS: [(usize, f64, f64); 199] = [
    (2, 0.7431, 0.3995),
    (3, 1.8493, 0.9937),
    (4, 0.9550, 0.5132),
    (5, 1.3487, 0.8440),
    (6, 0.9940, 0.6122),
    (7, 1.1985, 0.8588),
    (8, 1.0050, 0.6699),
    (9, 1.1317, 0.8734),
    (10, 1.0070, 0.7201),
    (11, 1.0960, 0.8891),
    (12, 1.0063, 0.7575),
    (13, 1.0742, 0.9023),
    (14, 1.0052, 0.7855),
    (15, 1.0600, 0.9125),
    (16, 1.0039, 0.8078),
    (17, 1.0502, 0.9210),
    (18, 1.0028, 0.8260),
    (19, 1.0429, 0.9279),
    (20, 1.0021, 0.8411),
    (21, 1.0374, 0.9338),
    (22, 1.0014, 0.8537),
    (23, 1.0331, 0.9388),
    (24, 1.0009, 0.8644),
    (25, 1.0296, 0.9431),
    (26, 1.0007, 0.8737),
    (27, 1.0269, 0.9468),
    (28, 1.0004, 0.8819),
    (29, 1.0245, 0.9501),
    (30, 1.0001, 0.8890),
    (31, 1.0226, 0.9531),
    (32, 0.9999, 0.8953),
    (33, 1.0209, 0.9556),
    (34, 0.9998, 0.9009),
    (35, 1.0195, 0.9579),
    (36, 0.9997, 0.9060),
    (37, 1.0182, 0.9600),
    (38, 0.9996, 0.9106),
    (39, 1.0171, 0.9619),
    (40, 0.9997, 0.9147),
    (41, 1.0162, 0.9636),
    (42, 0.9996, 0.9185),
    (43, 1.0154, 0.9652),
    (44, 0.9996, 0.9220),
    (45, 1.0146, 0.9667),
    (46, 0.9996, 0.9252),
    (47, 1.0139, 0.9680),
    (48, 0.9995, 0.9281),
    (49, 1.0133, 0.9692),
    (50, 0.9995, 0.9308),
    (51, 1.0127, 0.9704),
    (52, 0.9996, 0.9333),
    (53, 1.0122, 0.9714),
    (54, 0.9995, 0.9356),
    (55, 1.0117, 0.9724),
    (56, 0.9995, 0.9378),
    (57, 1.0112, 0.9733),
    (58, 0.9996, 0.9399),
    (59, 1.0109, 0.9742),
    (60, 0.9996, 0.9418),
    (61, 1.0105, 0.9750),
    (62, 0.9995, 0.9436),
    (63, 1.0102, 0.9757),
    (64, 0.9996, 0.9452),
    (65, 1.0099, 0.9764),
    (66, 0.9996, 0.9469),
    (67, 1.0095, 0.9771),
    (68, 0.9996, 0.9483),
    (69, 1.0092, 0.9778),
    (70, 0.9996, 0.9497),
    (71, 1.0090, 0.9784),
    (72, 0.9996, 0.9511),
    (73, 1.0088, 0.9789),
    (74, 0.9997, 0.9524),
    (75, 1.0085, 0.9794),
    (76, 0.9997, 0.9536),
    (77, 1.0083, 0.9800),
    (78, 0.9997, 0.9547),
    (79, 1.0081, 0.9805),
    (80, 0.9996, 0.9558),
    (81, 1.0079, 0.9809),
    (82, 0.9997, 0.9568),
    (83, 1.0077, 0.9814),
    (84, 0.9997, 0.9578),
    (85, 1.0076, 0.9818),
    (86, 0.9997, 0.9588),
    (87, 1.0074, 0.9822),
    (88, 0.9997, 0.9597),
    (89, 1.0072, 0.9825),
    (90, 0.9997, 0.9605),
    (91, 1.0071, 0.9830),
    (92, 0.9997, 0.9614),
    (93, 1.0069, 0.9833),
    (94, 0.9997, 0.9621),
    (95, 1.0068, 0.9836),
    (96, 0.9998, 0.9629),
    (97, 1.0067, 0.9840),
    (98, 0.9998, 0.9636),
    (99, 1.0065, 0.9843),
    (100, 0.9998, 0.9644),
    (109, 1.0060, 0.9856),
    (110, 0.9999, 0.9675),
    (119, 1.0054, 0.9868),
    (120, 0.9999, 0.9702),
    (129, 1.0049, 0.9878),
    (130, 0.9999, 0.9724),
    (139, 1.0048, 0.9887),
    (140, 1.0000, 0.9743),
    (149, 1.0045, 0.9895),
    (150, 1.0000, 0.9761),
    (159, 1.0041, 0.9901),
    (160, 1.0000, 0.9775),
    (169, 1.0039, 0.9907),
    (170, 1.0001, 0.9788),
    (179, 1.0037, 0.9912),
    (180, 1.0000, 0.9800),
    (189, 1.0035, 0.9916),
    (190, 1.0001, 0.9809),
    (199, 1.0034, 0.9921),
    (200, 1.0000, 0.9819),
    (249, 1.0027, 0.9937),
    (250, 1.0000, 0.9855),
    (299, 1.0023, 0.9947),
    (300, 1.0001, 0.9879),
    (349, 1.0020, 0.9954),
    (350, 1.0001, 0.9896),
    (399, 1.0017, 0.9960),
    (400, 1.0001, 0.9909),
    (449, 1.0016, 0.9965),
    (450, 1.0000, 0.9919),
    (499, 1.0014, 0.9968),
    (500, 1.0000, 0.9927),
    (549, 1.0013, 0.9971),
    (550, 1.0001, 0.9934),
    (599, 1.0011, 0.9974),
    (600, 1.0000, 0.9939),
    (649, 1.0011, 0.9975),
    (650, 1.0001, 0.9944),
    (699, 1.0010, 0.9977),
    (700, 1.0001, 0.9948),
    (749, 1.0010, 0.9979),
    (750, 1.0001, 0.9952),
    (799, 1.0009, 0.9981),
    (800, 1.0001, 0.9954),
    (849, 1.0008, 0.9981),
    (850, 1.0001, 0.9957),
    (899, 1.0008, 0.9982),
    (900, 1.0000, 0.9959),
    (949, 1.0007, 0.9983),
    (950, 1.0001, 0.9961),
    (999, 1.0007, 0.9984),
    (1000, 1.0000, 0.9963),
    (1049, 1.0006, 0.9985),
    (1050, 1.0001, 0.9965),
    (1099, 1.0007, 0.9985),
    (1100, 1.0000, 0.9967),
    (1149, 1.0006, 0.9986),
    (1150, 1.0000, 0.9968),
    (1199, 1.0006, 0.9987),
    (1200, 1.0001, 0.9970),
    (1249, 1.0006, 0.9987),
    (1250, 1.0000, 0.9971),
    (1299, 1.0006, 0.9988),
    (1300, 1.0000, 0.9972),
    (1499, 1.0005, 0.9989),
    (1500, 1.0000, 0.9976),
    (1999, 1.0004, 0.9992),
    (2000, 1.0000, 0.9982),
    (2499, 1.0003, 0.9993),
    (2500, 1.0000, 0.9985),
    (2999, 1.0002, 0.9995),
    (3000, 1.0000, 0.9988),
    (3499, 1.0002, 0.9996),
    (3500, 1.0000, 0.9990),
    (3999, 1.0002, 0.9996),
    (4000, 1.0000, 0.9991),
    (4499, 1.0002, 0.9996),
    (4500, 1.0000, 0.9992),
    (4999, 1.0001, 0.9997),
    (5000, 1.0000, 0.9993),
    (5499, 1.0001, 0.9997),
    (5500, 1.0000, 0.9993),
    (5999, 1.0001, 0.9997),
    (6000, 1.0000, 0.9994),
    (6499, 1.0001, 0.9998),
    (6500, 1.0000, 0.9994),
    (6999, 1.0001, 0.9998),
    (7000, 1.0000, 0.9995),
    (7499, 1.0001, 0.9998),
    (7500, 1.0000, 0.9995),
    (7999, 1.0001, 0.9998),
    (8000, 1.0000, 0.9995),
    (8499, 1.0001, 0.9998),
    (8500, 1.0000, 0.9996),
    (8999, 1.0001, 0.9998),
    (9000, 1.0000, 0.9996),
    (9499, 1.0001, 0.9998),
    (9500, 1.0000, 0.9996),
    (9999, 1.0001, 0.9998),
    (10000, 1.0000, 0.9996),
];
