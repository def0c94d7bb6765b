package corpus

import (
	"strings"
)

// Clamp keeps value within [low, high].
func Clamp(value, low, high int) int {
	if value < low {
		return low
	}
	if value > high {
		return high
	}
	return value
}

func JoinLabels(labels []string, sep string) string {
	joined := strings.Join(labels, sep)
	trimmed := strings.TrimSpace(joined)
	upper := strings.ToUpper(trimmed)
	return upper
}

func SumPositive(values []int) int {
	total := 0
	for _, v := range values {
		if v > 0 {
			total += v
		}
	}
	return total
}

func FirstNegative(values []int) int {
	for i := 0; i < len(values); i++ {
		if values[i] < 0 {
			return i
		}
	}
	return -1
}

func GradeOf(score int) string {
	switch score / 10 {
	case 10, 9:
		return "A"
	case 8:
		return "B"
	case 7:
		return "C"
	default:
		return "F"
	}
}

func ParseMode(raw string) int {
	switch mode := strings.TrimSpace(raw); mode {
	case "fast":
		return 1
	case "slow":
		return 2
	default:
		return 0
	}
}

func RetryCount(attempts []bool, limit int) int {
	count := 0
	for {
		if count >= limit {
			break
		}
		if count < len(attempts) && attempts[count] {
			break
		}
		count++
	}
	return count
}

func MultiGuard(a, b int, mode string) string {
	if a > 0 &&
		b > 0 {
		return "both"
	}
	if mode == "loose" ||
		a+b > 10 {
		return "partial"
	}
	return "none"
}

func FindKey(table map[string]int, needle int) string {
	for key, value := range table {
		if value == needle {
			return key
		}
	}
	return ""
}

func Classify(n int) string {
	if n < 0 {
		return "negative"
	} else if n == 0 {
		return "zero"
	} else if n < 10 {
		return "small"
	}
	return "large"
}

func CountVowels(text string) int {
	count := 0
	for _, r := range text {
		switch r {
		case 'a', 'e', 'i', 'o', 'u':
			count++
		}
	}
	return count
}

func AbsDiff(a, b int) int {
	diff := a - b
	if diff < 0 {
		return -diff
	}
	return diff
}
