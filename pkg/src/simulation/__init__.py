# Mo hinh, pulse Fourier va tich phan khung
