package mathx

// ScaleAll multiplies every entry by factor, clamping at limit.
func ScaleAll(values []int, factor int, limit int) []int {
	out := make([]int, 0, len(values))
	for _, v := range values {
		scaled := v * factor
		if scaled > limit {
			scaled = limit
		}
		if scaled < -limit {
			scaled = -limit
		}
		out = append(out, scaled)
	}
	return out
}

func MeanOrZero(values []int) int {
	if len(values) == 0 {
		return 0
	}
	total := 0
	for _, v := range values {
		total += v
	}
	return total / len(values)
}

func Bound(value, low, high int) int {
	if value < low {
		return low
	}
	if value > high {
		return high
	}
	return value
}
