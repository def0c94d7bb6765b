package mathx

// Percentile returns the nearest-rank percentile of sorted input.
func Percentile(sorted []int, rank int) int {
	if len(sorted) == 0 {
		return 0
	}
	clamped := Bound(rank, 0, 100)
	index := clamped * (len(sorted) - 1) / 100
	return sorted[index]
}

func SpreadOf(values []int) int {
	if len(values) == 0 {
		return 0
	}
	low := values[0]
	high := values[0]
	for _, v := range values {
		if v < low {
			low = v
		}
		if v > high {
			high = v
		}
	}
	return high - low
}
