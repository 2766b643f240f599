//! Published theta-sweep tables for the 33-node instance. Each row is
//! `theta` then `obj, seq mean, seq std, conc mean, conc std` for the
//! one-stage and the two-stage solution.

pub struct Reference {
    pub length_limit: f64,
    pub alpha: f64,
    pub rows: [[f64; 11]; 11],
}

pub const TABLES: [Reference; 6] = [
    Reference {
        length_limit: 80.0,
        alpha: 0.2,
        rows: [
            [0.00, 710.00, 680.19, 41.66, 681.63, 41.43, 710.00, 693.76, 27.37, 695.29, 24.89],
            [0.10, 690.00, 676.52, 28.56, 677.93, 27.62, 700.00, 691.55, 19.85, 692.43, 18.59],
            [0.20, 690.00, 688.48, 7.08, 688.82, 6.36, 690.00, 685.64, 18.87, 685.70, 18.79],
            [0.30, 680.00, 679.58, 6.02, 679.58, 6.02, 680.00, 679.93, 1.38, 679.94, 1.34],
            [0.40, 670.00, 670.00, 0.00, 670.00, 0.00, 670.00, 679.77, 1.50, 679.78, 1.47],
            [0.50, 660.00, 660.00, 0.00, 660.00, 0.00, 660.00, 660.00, 0.00, 660.00, 0.00],
            [0.60, 650.00, 650.00, 0.00, 650.00, 0.00, 650.00, 650.00, 0.00, 650.00, 0.00],
            [0.70, 640.00, 640.00, 0.00, 640.00, 0.00, 640.00, 640.68, 5.17, 640.68, 5.17],
            [0.80, 630.00, 630.00, 0.00, 630.00, 0.00, 640.00, 640.00, 0.00, 640.00, 0.00],
            [0.90, 630.00, 630.00, 0.00, 630.00, 0.00, 630.00, 630.00, 0.00, 630.00, 0.00],
            [1.00, 620.00, 620.00, 0.00, 620.00, 0.00, 630.00, 630.00, 0.00, 630.00, 0.00],
        ],
    },
    Reference {
        length_limit: 80.0,
        alpha: 0.5,
        rows: [
            [0.00, 710.00, 652.47, 77.39, 657.90, 73.04, 710.00, 652.47, 77.39, 657.90, 73.04],
            [0.10, 680.00, 662.97, 40.82, 664.29, 39.68, 680.00, 680.41, 25.69, 681.26, 24.96],
            [0.20, 660.00, 658.71, 8.26, 658.85, 7.74, 660.00, 655.91, 17.83, 656.05, 17.58],
            [0.30, 640.00, 639.83, 2.07, 639.86, 2.00, 640.00, 639.48, 6.43, 639.54, 6.15],
            [0.40, 620.00, 620.00, 0.00, 620.00, 0.00, 630.00, 629.99, 0.32, 629.99, 0.32],
            [0.50, 610.00, 610.00, 0.00, 610.00, 0.00, 610.00, 631.71, 19.40, 633.11, 19.23],
            [0.60, 590.00, 590.00, 0.00, 590.00, 0.00, 600.00, 600.00, 0.00, 600.00, 0.00],
            [0.70, 570.00, 570.00, 0.00, 570.00, 0.00, 580.00, 580.00, 0.00, 580.00, 0.00],
            [0.80, 570.00, 570.00, 0.00, 570.00, 0.00, 570.00, 600.00, 0.00, 600.00, 0.00],
            [0.90, 550.00, 550.00, 0.00, 550.00, 0.00, 560.00, 593.93, 24.90, 596.25, 28.57],
            [1.00, 540.00, 540.00, 0.00, 540.00, 0.00, 550.00, 570.00, 0.00, 570.00, 0.00],
        ],
    },
    Reference {
        length_limit: 90.0,
        alpha: 0.2,
        rows: [
            [0.00, 770.00, 744.96, 35.74, 748.44, 33.24, 770.0, 728.16, 44.97, 729.68, 45.17],
            [0.10, 760.00, 750.74, 25.94, 751.33, 25.31, 760.0, 754.09, 17.22, 754.47, 16.44],
            [0.20, 750.00, 746.09, 17.02, 746.51, 16.21, 750.0, 752.69, 10.43, 752.93, 9.90],
            [0.30, 740.00, 739.80, 2.36, 739.85, 2.25, 740.0, 747.12, 5.07, 747.26, 4.81],
            [0.40, 730.00, 730.00, 0.00, 730.00, 0.00, 730.0, 730.00, 0.00, 730.00, 0.00],
            [0.50, 720.00, 720.00, 0.00, 720.00, 0.00, 720.0, 720.00, 0.00, 720.00, 0.00],
            [0.60, 710.00, 710.00, 0.00, 710.00, 0.00, 710.0, 710.00, 0.00, 710.00, 0.00],
            [0.70, 700.00, 700.00, 0.00, 700.00, 0.00, 710.0, 736.43, 4.83, 736.71, 4.74],
            [0.80, 690.00, 690.00, 0.00, 690.00, 0.00, 690.0, 690.00, 0.00, 690.00, 0.00],
            [0.90, 680.00, 680.00, 0.00, 680.00, 0.00, 690.0, 700.00, 0.00, 700.00, 0.00],
            [1.00, 670.00, 670.00, 0.00, 670.00, 0.00, 680.0, 680.00, 0.00, 680.00, 0.00],
        ],
    },
    Reference {
        length_limit: 90.0,
        alpha: 0.5,
        rows: [
            [0.00, 770.00, 722.34, 58.05, 727.46, 57.50, 770.0, 719.97, 59.25, 725.56, 58.42],
            [0.10, 740.00, 718.99, 48.56, 721.56, 43.38, 740.0, 730.86, 38.69, 733.30, 36.30],
            [0.20, 720.00, 718.37, 10.40, 718.43, 10.37, 720.0, 716.06, 16.54, 716.74, 15.18],
            [0.30, 690.00, 689.98, 0.45, 689.98, 0.45, 700.0, 699.83, 2.88, 699.88, 2.57],
            [0.40, 670.00, 670.00, 0.00, 670.00, 0.00, 680.0, 683.83, 12.27, 684.13, 13.68],
            [0.50, 650.00, 650.00, 0.00, 650.00, 0.00, 660.0, 679.90, 1.18, 679.92, 1.09],
            [0.60, 640.00, 640.00, 0.00, 640.00, 0.00, 640.0, 701.27, 26.59, 702.86, 26.30],
            [0.70, 620.00, 620.00, 0.00, 620.00, 0.00, 630.0, 630.00, 0.00, 630.00, 0.00],
            [0.80, 610.00, 610.00, 0.00, 610.00, 0.00, 610.0, 650.00, 13.75, 650.21, 14.85],
            [0.90, 600.00, 600.00, 0.00, 600.00, 0.00, 600.0, 649.83, 26.63, 652.74, 31.74],
            [1.00, 580.00, 580.00, 0.00, 580.00, 0.00, 590.0, 604.88, 13.09, 608.52, 16.38],
        ],
    },
    Reference {
        length_limit: 100.0,
        alpha: 0.2,
        rows: [
            [0.00, 800.0, 795.39, 7.86, 795.68, 7.84, 800.0, 776.88, 45.66, 778.99, 41.13],
            [0.10, 800.0, 798.06, 5.57, 798.14, 5.53, 800.0, 797.02, 7.11, 797.20, 7.05],
            [0.20, 790.0, 789.83, 1.86, 789.83, 1.86, 790.0, 789.77, 1.86, 789.78, 1.83],
            [0.30, 790.0, 789.98, 0.45, 789.99, 0.32, 790.0, 789.89, 1.70, 789.89, 1.70],
            [0.40, 780.0, 780.00, 0.00, 780.00, 0.00, 790.0, 790.00, 0.00, 790.00, 0.00],
            [0.50, 780.0, 780.00, 0.00, 780.00, 0.00, 780.0, 780.00, 0.00, 780.00, 0.00],
            [0.60, 760.0, 760.00, 0.00, 760.00, 0.00, 770.0, 770.00, 0.00, 770.00, 0.00],
            [0.70, 760.0, 760.00, 0.00, 760.00, 0.00, 760.0, 760.00, 0.00, 760.00, 0.00],
            [0.80, 740.0, 740.00, 0.00, 740.00, 0.00, 750.0, 769.39, 2.39, 769.48, 2.22],
            [0.90, 740.0, 740.00, 0.00, 740.00, 0.00, 740.0, 740.00, 0.00, 740.00, 0.00],
            [1.00, 730.0, 730.00, 0.00, 730.00, 0.00, 730.0, 730.00, 0.00, 730.00, 0.00],
        ],
    },
    Reference {
        length_limit: 100.0,
        alpha: 0.5,
        rows: [
            [0.00, 800.0, 778.79, 43.57, 779.34, 43.51, 800.0, 787.07, 19.79, 787.63, 18.57],
            [0.10, 790.0, 774.72, 40.31, 776.13, 38.69, 790.0, 776.04, 34.31, 778.05, 32.25],
            [0.20, 780.0, 777.50, 14.56, 778.10, 12.25, 780.0, 778.71, 8.64, 778.81, 8.18],
            [0.30, 750.0, 749.71, 4.56, 749.77, 4.15, 760.0, 759.72, 3.15, 759.79, 2.84],
            [0.40, 730.0, 730.00, 0.00, 730.00, 0.00, 730.0, 749.27, 3.57, 749.33, 3.44],
            [0.50, 710.0, 710.00, 0.00, 710.00, 0.00, 710.0, 710.00, 0.00, 710.00, 0.00],
            [0.60, 690.0, 690.00, 0.00, 690.00, 0.00, 690.0, 719.75, 2.29, 719.81, 2.02],
            [0.70, 670.0, 670.00, 0.00, 670.00, 0.00, 670.0, 718.05, 38.05, 720.08, 38.58],
            [0.80, 650.0, 650.00, 0.00, 650.00, 0.00, 660.0, 720.00, 0.00, 720.00, 0.00],
            [0.90, 630.0, 630.00, 0.00, 630.00, 0.00, 640.0, 650.00, 0.00, 650.00, 0.00],
            [1.00, 620.0, 620.00, 0.00, 620.00, 0.00, 630.0, 640.00, 0.00, 640.00, 0.00],
        ],
    },
];
